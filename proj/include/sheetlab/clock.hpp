#pragma once

#include "sheetlab/fractional_calculus.hpp"

#include <optional>
#include <string>

namespace sheetlab {

enum class ClockKind { BTBS, ISLTBS };

// The random clock driving each sheet parameter: |B(t)| for BTBS, Lambda(t) for ISLTBS.
struct Clock {
    ClockKind kind = ClockKind::BTBS;
    std::optional<FractionalOrder> order;  // set exactly when kind == ISLTBS

    static Clock btbs() { return {ClockKind::BTBS, std::nullopt}; }
    static Clock isltbs(FractionalOrder order) { return {ClockKind::ISLTBS, order}; }

    // Both clocks are self-similar: S(t) has the law of t^e S(1), with e = 1/2 or beta.
    double time_exponent() const { return kind == ClockKind::BTBS ? 0.5 : order->beta(); }
    std::string name() const;
    void validate() const;
};

}  // namespace sheetlab
