#pragma once

#include <string>

namespace trudlab {

/// The exponent p: a real p >= 2, or the label Infinity.
/// Infinity is a separate branch everywhere and never a large finite p.
class Exponent {
public:
    static Exponent finite(double p);
    static Exponent infinity();
    /// Accepts "inf", "infinity", "∞" or a decimal number.
    static Exponent parse(const std::string& text);

    bool is_infinite() const { return infinite_; }
    /// Finite value of p. Throws Unsupported for Infinity.
    double value() const;

    /// Homogeneity degree of the operator: p-1, or 3 for Infinity.
    double degree() const { return infinite_ ? 3.0 : p_ - 1.0; }
    /// Exponent of the power profile r^beta: p/(p-1), or 4/3 for Infinity.
    double beta() const { return infinite_ ? 4.0 / 3.0 : p_ / (p_ - 1.0); }
    /// Delta_p r^beta: n beta^(p-1), or 64/81 for Infinity.
    double power_constant_a(int n) const;
    /// |D r^beta|^p / r^beta: beta^p, or (4/3)^4 for Infinity.
    double power_constant_b() const;

    std::string to_string() const;

    friend bool operator==(const Exponent& a, const Exponent& b) {
        return a.infinite_ == b.infinite_ && (a.infinite_ || a.p_ == b.p_);
    }

private:
    Exponent(bool infinite, double p) : infinite_(infinite), p_(p) {}
    bool infinite_;
    double p_;
};

}  // namespace trudlab
