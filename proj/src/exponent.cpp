#include "trudlab/exponent.hpp"

#include <cmath>
#include <sstream>

#include "trudlab/errors.hpp"

namespace trudlab {

Exponent Exponent::finite(double p) {
    if (!std::isfinite(p) || p < 2.0) {
        throw DomainError("exponent p must satisfy 2 <= p < inf, got " + std::to_string(p));
    }
    return Exponent(false, p);
}

Exponent Exponent::infinity() { return Exponent(true, 0.0); }

Exponent Exponent::parse(const std::string& text) {
    if (text == "inf" || text == "infinity" || text == "Infinity" || text == "∞") {
        return infinity();
    }
    std::size_t used = 0;
    double p = 0.0;
    try {
        p = std::stod(text, &used);
    } catch (const std::exception&) {
        throw DomainError("cannot parse exponent '" + text + "'");
    }
    if (used != text.size()) throw DomainError("cannot parse exponent '" + text + "'");
    return finite(p);
}

double Exponent::value() const {
    if (infinite_) throw Unsupported("p = inf has no finite value");
    return p_;
}

double Exponent::power_constant_a(int n) const {
    if (infinite_) return 64.0 / 81.0;
    return n * std::pow(beta(), p_ - 1.0);
}

double Exponent::power_constant_b() const {
    if (infinite_) return std::pow(4.0 / 3.0, 4.0);
    return std::pow(beta(), p_);
}

std::string Exponent::to_string() const {
    if (infinite_) return "inf";
    std::ostringstream out;
    out << p_;
    return out.str();
}

}  // namespace trudlab
