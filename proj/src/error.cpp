#include "adbeam/error.hpp"

#include <sstream>

namespace adbeam {

namespace {

std::string stability_message(double dt, double limit)
{
    std::ostringstream os;
    os.precision(17);
    os << "time step " << dt << " exceeds the stability limit " << limit;
    return os.str();
}

std::string failure_message(double time)
{
    std::ostringstream os;
    os.precision(17);
    os << "non-finite state at t = " << time;
    return os.str();
}

std::string config_message(const std::string& what, std::size_t line)
{
    if (line == 0) return "config: " + what;
    return "config:" + std::to_string(line) + ": " + what;
}

} // namespace

StabilityError::StabilityError(double dt, double limit)
    : Error(stability_message(dt, limit)), dt_(dt), limit_(limit)
{
}

NumericalFailure::NumericalFailure(double time) : Error(failure_message(time)), time_(time) {}

ConfigError::ConfigError(const std::string& what, std::size_t line)
    : Error(config_message(what, line)), line_(line)
{
}

} // namespace adbeam
