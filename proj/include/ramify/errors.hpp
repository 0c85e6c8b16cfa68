#pragma once

#include <stdexcept>
#include <string>

namespace ramify {

enum class errc {
  NotAPthPower,
  ZeroPolynomial,
  InsufficientPrecision,
  NotInFiltration,
  LengthMismatch,
  LengthOverflow,
  NonTermination,
  BudgetExceeded,
  ConductorTooSmall,
  ImperfectResidue,
  NoPreimage,
  MalformedPresentation,
  PreconditionViolated,
  ZeroFunction,
  RamifiedPlace,
  RestrictionUndefined,
  CommonComponent,
  DegenerateConfiguration,
  ParseError,
  Unsupported,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::NotAPthPower: return "NotAPthPower";
    case errc::ZeroPolynomial: return "ZeroPolynomial";
    case errc::InsufficientPrecision: return "InsufficientPrecision";
    case errc::NotInFiltration: return "NotInFiltration";
    case errc::LengthMismatch: return "LengthMismatch";
    case errc::LengthOverflow: return "LengthOverflow";
    case errc::NonTermination: return "NonTermination";
    case errc::BudgetExceeded: return "BudgetExceeded";
    case errc::ConductorTooSmall: return "ConductorTooSmall";
    case errc::ImperfectResidue: return "ImperfectResidue";
    case errc::NoPreimage: return "NoPreimage";
    case errc::MalformedPresentation: return "MalformedPresentation";
    case errc::PreconditionViolated: return "PreconditionViolated";
    case errc::ZeroFunction: return "ZeroFunction";
    case errc::RamifiedPlace: return "RamifiedPlace";
    case errc::RestrictionUndefined: return "RestrictionUndefined";
    case errc::CommonComponent: return "CommonComponent";
    case errc::DegenerateConfiguration: return "DegenerateConfiguration";
    case errc::ParseError: return "ParseError";
    case errc::Unsupported: return "Unsupported";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool cond, errc code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

}  // namespace ramify
