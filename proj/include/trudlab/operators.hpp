#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "trudlab/exponent.hpp"
#include "trudlab/field.hpp"
#include "trudlab/radial.hpp"

namespace trudlab {

struct SpaceTimePoint {
    double r = 0.0;
    double t = 0.0;
};

enum class Verdict { Subsolution, Supersolution, Solution, Indeterminate };

std::string to_string(Verdict v);
Verdict parse_verdict(const std::string& text);
/// Solution satisfies both Subsolution and Supersolution.
bool verdict_satisfies(Verdict measured, Verdict expected);

/// Outcome of a sampled sign test.
/// Subsolution iff min >= -tolerance*scale, Supersolution iff max <= tolerance*scale.
struct ResidualReport {
    std::string family;
    Exponent p = Exponent::finite(2.0);
    int n = 2;
    double min_residual = 0.0;
    double max_residual = 0.0;
    SpaceTimePoint argmin;
    SpaceTimePoint argmax;
    std::size_t samples = 0;
    Verdict verdict = Verdict::Indeterminate;
    Verdict expected = Verdict::Indeterminate;
    double tolerance = 1e-9;
    double scale = 0.0;
    std::uint64_t seed = 0;
    /// Samples where the 0^0 = 1 convention was used (p = 2, u = 0).
    std::uint64_t zero_base_hits = 0;
    std::vector<std::pair<std::string, double>> params;
    std::vector<std::pair<std::string, double>> derived;

    bool matches_expected() const { return verdict_satisfies(verdict, expected); }
};

Verdict classify(double min_residual, double max_residual, double tolerance, double scale);

/// A residual together with the sum of absolute values of the terms it was
/// assembled from. The magnitude sets the scale for sign verdicts.
struct ResidualTerms {
    double residual = 0.0;
    double magnitude = 0.0;
};

/// |v'|^{p-2}((p-1)v'' + (n-1)v'/r). Finite p only.
double eval_p_laplacian_radial(const RadialProfile& profile, const Exponent& p, int n, double r);

/// (u')^2 u''.
double eval_inf_laplacian_radial(const RadialProfile& profile, double r);

/// Dispatches on the exponent: Delta_p for finite p, Delta_inf otherwise.
double eval_laplacian_radial(const RadialProfile& profile, const Exponent& p, int n, double r);

/// Same dispatch, returning the term magnitude |v'|^{p-2}((p-1)|v''| + (n-1)|v'|/r).
ResidualTerms laplacian_terms(const RadialProfile& profile, const Exponent& p, int n, double r);

/// Delta_p u - (p-1)|u|^{p-2} u_t, or Delta_inf u - 3u^2 u_t.
double gamma_p_residual(const SpaceTimeFunction& u, const Exponent& p, int n, SpaceTimePoint pt);
ResidualTerms gamma_p_terms(const SpaceTimeFunction& u, const Exponent& p, int n, SpaceTimePoint pt);

/// Delta_p v + (p-1)|Dv|^p - (p-1)v_t, or Delta_inf v + |Dv|^4 - 3v_t.
double g_p_residual(const SpaceTimeFunction& v, const Exponent& p, int n, SpaceTimePoint pt);
ResidualTerms g_p_terms(const SpaceTimeFunction& v, const Exponent& p, int n, SpaceTimePoint pt);

/// max over points of |Gamma_p u - u^{deg} G_p(log u)|. Throws DomainError if u <= 0.
double log_transform_consistency(const SpaceTimeFunction& u, const Exponent& p, int n,
                                 const std::vector<SpaceTimePoint>& points);

/// Finite-difference Gamma_p residuals on a field.
/// residual[j-1][i] is the residual at time level j >= 1, node i < intervals.
struct FieldResidual {
    std::vector<std::vector<double>> residual;
    std::vector<std::vector<double>> magnitude;
    /// max |residual| over nodes with r >= r_min and times >= t_min.
    double max_abs(double r_min = 0.0, double t_min = 0.0) const;
    double max_magnitude(double r_min = 0.0, double t_min = 0.0) const;
    RadialGrid grid;
    std::vector<double> times;  // times of levels 1..
};

FieldResidual fd_residual_on_field(const SpaceTimeField& field, const Exponent& p, int n);

/// Number of finite-p kernel evaluations on this thread. Lets tests assert
/// that the Infinity branch never reaches finite-p code.
std::uint64_t finite_path_calls();
void reset_finite_path_calls();

/// 0^0 = 1 convention hits for p = 2 at u = 0 on this thread.
std::uint64_t zero_base_hits();
void reset_zero_base_hits();

}  // namespace trudlab
