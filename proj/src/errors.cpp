#include "tendonstat/errors.hpp"

#include <sstream>

#include "tendonstat/units.hpp"

namespace tendonstat {

namespace {

std::string describe_limit(double angle, double lower, double upper, const std::string& where) {
  std::ostringstream os;
  os << where << ": bend angle " << units::to_deg(angle) << " deg outside limits [" << units::to_deg(lower)
     << ", " << units::to_deg(upper) << "] deg";
  return os.str();
}

}  // namespace

BendLimitError::BendLimitError(double angle, double lower, double upper, const std::string& where)
    : DomainError(describe_limit(angle, lower, upper, where)), angle_(angle), lower_(lower), upper_(upper) {}

}  // namespace tendonstat
