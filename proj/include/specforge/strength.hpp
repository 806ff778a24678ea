#pragma once

#include <cassert>
#include <cmath>

namespace specforge {

/// Interaction strength beta in {0} u (0, inf) u {inf}.
///
/// Zero and infinite strengths are genuinely different operators (an
/// untouched junction vs. full Neumann decoupling), so they are carried
/// as kinds instead of float sentinels.
class Strength {
public:
    enum class Kind { Zero, Finite, Infinite };

    constexpr Strength() : kind_(Kind::Zero), value_(0.0) {}

    static constexpr Strength zero() { return Strength(Kind::Zero, 0.0); }
    static constexpr Strength infinite() { return Strength(Kind::Infinite, 0.0); }
    static Strength finite(double v) {
        assert(v > 0.0 && std::isfinite(v));
        return Strength(Kind::Finite, v);
    }

    constexpr Kind kind() const { return kind_; }
    constexpr bool is_zero() const { return kind_ == Kind::Zero; }
    constexpr bool is_finite() const { return kind_ == Kind::Finite; }
    constexpr bool is_infinite() const { return kind_ == Kind::Infinite; }

    double value() const {
        assert(kind_ == Kind::Finite);
        return value_;
    }

    /// Jump coefficient for state propagation: u(+) = u(-) + beta * u'.
    /// Zero strength is the identity jump; infinite strength never reaches
    /// propagation (the problem is split there first).
    double jump_coefficient() const {
        assert(kind_ != Kind::Infinite);
        return kind_ == Kind::Zero ? 0.0 : value_;
    }

    /// 1/beta with the convention 1/inf = 0 (form coefficient).
    double reciprocal() const {
        assert(kind_ != Kind::Zero);
        return kind_ == Kind::Infinite ? 0.0 : 1.0 / value_;
    }

    friend bool operator==(const Strength& a, const Strength& b) {
        return a.kind_ == b.kind_ && (a.kind_ != Kind::Finite || a.value_ == b.value_);
    }

private:
    constexpr Strength(Kind kind, double value) : kind_(kind), value_(value) {}

    Kind kind_;
    double value_;
};

} // namespace specforge
