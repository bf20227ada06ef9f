#include "sheetlab/clock.hpp"

#include <stdexcept>

namespace sheetlab {

std::string Clock::name() const { return kind == ClockKind::BTBS ? "BTBS" : "ISLTBS"; }

void Clock::validate() const {
    if (kind == ClockKind::ISLTBS && !order) throw std::invalid_argument("ISLTBS clock needs a fractional order");
    if (kind == ClockKind::BTBS && order) throw std::invalid_argument("BTBS clock takes no fractional order");
}

}  // namespace sheetlab
