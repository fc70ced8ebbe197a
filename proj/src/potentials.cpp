#include "etk/potentials.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/expint.hpp>

#include "etk/error.hpp"

namespace etk {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// ψ(3/2) = 2 - γ - 2 ln 2
constexpr double kDigammaThreeHalves = 2.0 - std::numbers::egamma - 2.0 * std::numbers::ln2;

void require_positive(double value, const char* name, std::string_view family) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw Error(ErrorKind::Parameter,
                    std::string(family) + ": parameter " + name + " must be positive and finite");
    }
}

void require_blend(double C, std::string_view family) {
    if (!(C >= 0.0 && C <= 1.0)) {
        throw Error(ErrorKind::Parameter, std::string(family) + ": blend C must lie in [0, 1]");
    }
}

// <r^β> over g(r) = 4 c^{3/2}/√π r² exp(-c r²), β > -3.
double power_mean(double beta, double c) {
    return 2.0 * std::tgamma(0.5 * (beta + 3.0)) / std::sqrt(std::numbers::pi) * std::pow(c, -0.5 * beta);
}

// e^x K_ν(x). The asymptotic series is used where the direct product would
// overflow; at x > 50 it converges to rounding within a handful of terms.
double scaled_bessel_k(int nu, double x) {
    if (x <= 50.0) return std::exp(x) * boost::math::cyl_bessel_k(nu, x);
    const double mu = 4.0 * nu * nu;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 30; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (k * 8.0 * x);
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return std::sqrt(std::numbers::pi / (2.0 * x)) * sum;
}

// J(δ) = ∫₀^∞ u² e^{-u²}/(u + δ) du.
// Below δ = 6.5 through the Goodwin-Staton integral
//   G(δ) = ½ e^{-δ²} [π erfi(δ) - Ei(δ²)],  J = ½ - δ√π/2 + δ² G(δ);
// above, the asymptotic series in 1/δ, which is then accurate to rounding.
double shifted_coulomb_moment(double delta) {
    if (delta == 0.0) return 0.5;
    const double sqrt_pi = std::sqrt(std::numbers::pi);
    if (delta < 6.5) {
        const double z2 = delta * delta;
        double term = delta;
        double sum = delta;
        for (int n = 1; n < 400; ++n) {
            term *= z2 / n;
            const double add = term / (2.0 * n + 1.0);
            sum += add;
            if (add < 1e-17 * sum) break;
        }
        const double pi_erfi_scaled = 2.0 * sqrt_pi * sum * std::exp(-z2);
        const double ei_scaled = boost::math::expint(z2) * std::exp(-z2);
        const double G = 0.5 * (pi_erfi_scaled - ei_scaled);
        return 0.5 - 0.5 * delta * sqrt_pi + z2 * G;
    }
    // t_k = (-1)^k Γ((k+3)/2) / (2 δ^{k+1}),  t_{k+2} = t_k (k+3) / (2 δ²)
    const double inv2 = 1.0 / (delta * delta);
    std::array<double, 2> t{0.25 * sqrt_pi / delta, -0.5 * inv2};
    double sum = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 200; ++k) {
        double& term = t[static_cast<std::size_t>(k % 2)];
        if (std::abs(term) > prev) break;
        sum += term;
        prev = std::abs(term);
        if (prev < 1e-18 * std::abs(sum)) break;
        term *= 0.5 * (k + 3.0) * inv2;
    }
    return sum;
}

PotentialSpec rename(PotentialSpec base, std::string family, ParamMap params) {
    base.family = std::move(family);
    base.params = std::move(params);
    return base;
}

// w_a·a + w_b·b; curvature must be supplied by the caller.
PotentialSpec blend(const PotentialSpec& a, double wa, const PotentialSpec& b, double wb) {
    PotentialSpec out;
    out.eval = [fa = a.eval, fb = b.eval, wa, wb](double r) { return wa * fa(r) + wb * fb(r); };
    out.deriv1 = [fa = a.deriv1, fb = b.deriv1, wa, wb](double r) { return wa * fa(r) + wb * fb(r); };
    out.deriv2 = [fa = a.deriv2, fb = b.deriv2, wa, wb](double r) { return wa * fa(r) + wb * fb(r); };
    if (a.pair_mean && b.pair_mean) {
        out.pair_mean = [fa = a.pair_mean, fb = b.pair_mean, wa, wb](double c) {
            return wa * fa(c) + wb * fb(c);
        };
    }
    return out;
}

Curvature sample_sign(const RealFn& d1, const RealFn& d2, std::span<const double> y_samples, const char* what) {
    if (y_samples.empty()) throw Error(ErrorKind::Domain, "curvature test needs at least one sample");
    bool negative = false;
    bool positive = false;
    for (double y : y_samples) {
        if (!(y > 0.0)) throw Error(ErrorKind::Domain, "curvature samples must be positive");
        const double r = std::sqrt(y);
        const double f1 = d1(r);
        const double f2 = d2(r);
        const double numerator = f2 * r - f1;
        if (!std::isfinite(numerator)) {
            throw Error(ErrorKind::Domain, std::string(what) + " derivatives are not finite at r=" + std::to_string(r));
        }
        const double scale = std::abs(f2 * r) + std::abs(f1);
        if (std::abs(numerator) <= 1e-12 * scale) continue;
        (numerator < 0.0 ? negative : positive) = true;
    }
    if (negative && positive) return Curvature::Indefinite;
    if (negative) return Curvature::Negative;
    if (positive) return Curvature::Positive;
    return Curvature::Zero;
}

struct FamilyEntry {
    std::string_view id;
    std::array<std::pair<std::string_view, double>, 3> defaults;
    int count;
};

constexpr std::array<FamilyEntry, 10> kFamilies{{
    {"power", {{{"G", 1.0}, {"beta", kNaN}}}, 2},
    {"trunc-coulomb", {{{"c", 1.0}, {"d", kNaN}}}, 2},
    {"exciton", {{{"c", 1.0}, {"d", kNaN}}}, 2},
    {"linear", {{{"beta", 1.0}}}, 1},
    {"cubic", {{{"alpha", 1.0}}}, 1},
    {"log", {{{"beta", 1.0}}}, 1},
    {"gauss", {{{"beta", 10.0}}}, 1},
    {"cubic-linear", {{{"alpha", 1.0}, {"beta", 1.0}, {"C", kNaN}}}, 3},
    {"cubic-log", {{{"alpha", 1.0}, {"beta", 1.0}, {"C", kNaN}}}, 3},
    {"cubic-gauss", {{{"alpha", 1.0}, {"beta", 10.0}, {"C", kNaN}}}, 3},
}};

constexpr std::array<std::string_view, 10> kIds{"power",  "trunc-coulomb", "exciton",      "linear",    "cubic",
                                                "log",    "gauss",         "cubic-linear", "cubic-log", "cubic-gauss"};

}  // namespace

double PotentialSpec::param(std::string_view name) const {
    auto it = params.find(name);
    if (it == params.end()) {
        throw Error(ErrorKind::Parameter, family + ": no parameter named " + std::string(name));
    }
    return it->second;
}

KinematicsSpec nonrelativistic(double mass) {
    if (!(mass > 0.0)) throw Error(ErrorKind::InvalidSystem, "mass must be positive");
    KinematicsSpec k;
    k.family = "nonrel";
    k.mass = mass;
    k.eval = [mass](double p) { return p * p / (2.0 * mass); };
    k.deriv1 = [mass](double p) { return p / mass; };
    k.deriv2 = [mass](double) { return 1.0 / mass; };
    k.bT_curvature = Curvature::Zero;
    return k;
}

KinematicsSpec custom_kinematics(RealFn T, RealFn dT, RealFn d2T, Curvature bT_curvature) {
    KinematicsSpec k;
    k.family = "custom";
    k.eval = std::move(T);
    k.deriv1 = std::move(dT);
    k.deriv2 = std::move(d2T);
    k.bT_curvature = bT_curvature;
    return k;
}

PotentialSpec power_law(double G, double beta) {
    require_positive(G, "G", "power");
    if (!(beta > -2.0) || beta == 0.0 || !std::isfinite(beta)) {
        throw Error(ErrorKind::Parameter, "power: exponent beta must satisfy beta > -2 and beta != 0");
    }
    const double s = beta > 0.0 ? 1.0 : -1.0;
    const double amp = s * G;
    PotentialSpec p;
    p.family = "power";
    p.params = {{"G", G}, {"beta", beta}};
    p.eval = [amp, beta](double r) { return amp * std::pow(r, beta); };
    p.deriv1 = [amp, beta](double r) { return amp * beta * std::pow(r, beta - 1.0); };
    p.deriv2 = [amp, beta](double r) { return amp * beta * (beta - 1.0) * std::pow(r, beta - 2.0); };
    p.pair_mean = [amp, beta](double c) { return amp * power_mean(beta, c); };
    // b_V(y) = amp y^{β/2}:  b_V'' ∝ amp (β/2)(β/2 - 1)
    const double sign = amp * (0.5 * beta) * (0.5 * beta - 1.0);
    p.bV_curvature = sign > 0.0 ? Curvature::Positive : (sign < 0.0 ? Curvature::Negative : Curvature::Zero);
    return p;
}

PotentialSpec truncated_coulomb(double c, double d) {
    require_positive(c, "c", "trunc-coulomb");
    if (!(d >= 0.0) || !std::isfinite(d)) throw Error(ErrorKind::Parameter, "trunc-coulomb: d must be non-negative");
    PotentialSpec p;
    p.family = "trunc-coulomb";
    p.params = {{"c", c}, {"d", d}};
    p.eval = [c, d](double r) { return -c / (r + d); };
    p.deriv1 = [c, d](double r) { return c / ((r + d) * (r + d)); };
    p.deriv2 = [c, d](double r) { return -2.0 * c / ((r + d) * (r + d) * (r + d)); };
    // <(r+d)^{-1}> = 4 √c/√π J(d √c)
    p.pair_mean = [c, d](double cw) {
        const double s = std::sqrt(cw);
        return -c * 4.0 * s / std::sqrt(std::numbers::pi) * shifted_coulomb_moment(d * s);
    };
    p.bV_curvature = Curvature::Negative;
    return p;
}

PotentialSpec exciton(double c, double d) {
    require_positive(c, "c", "exciton");
    if (!(d >= 0.0) || !std::isfinite(d)) throw Error(ErrorKind::Parameter, "exciton: d must be non-negative");
    const double d2 = d * d;
    PotentialSpec p;
    p.family = "exciton";
    p.params = {{"c", c}, {"d", d}};
    p.eval = [c, d2](double r) { return -c / std::sqrt(r * r + d2); };
    p.deriv1 = [c, d2](double r) { return c * r / std::pow(r * r + d2, 1.5); };
    p.deriv2 = [c, d2](double r) { return c * (d2 - 2.0 * r * r) / std::pow(r * r + d2, 2.5); };
    if (d == 0.0) {
        p.pair_mean = [c](double cw) { return -c * power_mean(-1.0, cw); };
    } else {
        // <(r²+d²)^{-1/2}> = c^{3/2} d² e^{x} [K1(x) - K0(x)] / √π,  x = c d²/2
        p.pair_mean = [c, d2](double cw) {
            const double x = 0.5 * cw * d2;
            const double diff = scaled_bessel_k(1, x) - scaled_bessel_k(0, x);
            return -c * std::pow(cw, 1.5) * d2 * diff / std::sqrt(std::numbers::pi);
        };
    }
    p.bV_curvature = Curvature::Negative;
    return p;
}

PotentialSpec linear(double beta) {
    require_positive(beta, "beta", "linear");
    PotentialSpec p;
    p.family = "linear";
    p.params = {{"beta", beta}};
    p.eval = [beta](double r) { return beta * r; };
    p.deriv1 = [beta](double) { return beta; };
    p.deriv2 = [](double) { return 0.0; };
    p.pair_mean = [beta](double c) { return beta * power_mean(1.0, c); };
    p.bV_curvature = Curvature::Negative;
    return p;
}

PotentialSpec cubic(double alpha) {
    require_positive(alpha, "alpha", "cubic");
    PotentialSpec p;
    p.family = "cubic";
    p.params = {{"alpha", alpha}};
    p.eval = [alpha](double r) { return alpha * r * r * r; };
    p.deriv1 = [alpha](double r) { return 3.0 * alpha * r * r; };
    p.deriv2 = [alpha](double r) { return 6.0 * alpha * r; };
    p.pair_mean = [alpha](double c) { return alpha * power_mean(3.0, c); };
    p.bV_curvature = Curvature::Positive;
    return p;
}

PotentialSpec logarithmic(double beta) {
    require_positive(beta, "beta", "log");
    PotentialSpec p;
    p.family = "log";
    p.params = {{"beta", beta}};
    p.eval = [beta](double r) { return beta * std::log(r); };
    p.deriv1 = [beta](double r) { return beta / r; };
    p.deriv2 = [beta](double r) { return -beta / (r * r); };
    p.pair_mean = [beta](double c) { return 0.5 * beta * (kDigammaThreeHalves - std::log(c)); };
    p.bV_curvature = Curvature::Negative;
    return p;
}

PotentialSpec gaussian_well(double beta) {
    require_positive(beta, "beta", "gauss");
    if (!(beta > 1.0)) {
        throw Error(ErrorKind::NoBoundState, "gauss: amplitude beta must exceed 1 for a bound state");
    }
    PotentialSpec p;
    p.family = "gauss";
    p.params = {{"beta", beta}};
    p.eval = [beta](double r) { return -beta * std::exp(-r * r); };
    p.deriv1 = [beta](double r) { return 2.0 * beta * r * std::exp(-r * r); };
    p.deriv2 = [beta](double r) { return 2.0 * beta * (1.0 - 2.0 * r * r) * std::exp(-r * r); };
    p.pair_mean = [beta](double c) { return -beta * std::pow(c / (c + 1.0), 1.5); };
    p.bV_curvature = Curvature::Negative;
    return p;
}

PotentialSpec cubic_linear(double alpha, double beta, double C) {
    require_positive(alpha, "alpha", "cubic-linear");
    require_positive(beta, "beta", "cubic-linear");
    require_blend(C, "cubic-linear");
    ParamMap params{{"alpha", alpha}, {"beta", beta}, {"C", C}};
    if (C == 0.0) return rename(linear(beta), "cubic-linear", params);
    if (C == 1.0) return rename(cubic(alpha), "cubic-linear", params);
    auto p = blend(cubic(alpha), C, linear(beta), 1.0 - C);
    p.family = "cubic-linear";
    p.params = params;
    p.bV_curvature = Curvature::Indefinite;
    return p;
}

PotentialSpec cubic_log(double alpha, double beta, double C) {
    require_positive(alpha, "alpha", "cubic-log");
    require_positive(beta, "beta", "cubic-log");
    require_blend(C, "cubic-log");
    ParamMap params{{"alpha", alpha}, {"beta", beta}, {"C", C}};
    if (C == 0.0) return rename(logarithmic(beta), "cubic-log", params);
    if (C == 1.0) return rename(cubic(alpha), "cubic-log", params);
    auto p = blend(cubic(alpha), C, logarithmic(beta), 1.0 - C);
    p.family = "cubic-log";
    p.params = params;
    p.bV_curvature = Curvature::Indefinite;
    return p;
}

PotentialSpec cubic_gauss(double alpha, double beta, double C) {
    require_positive(alpha, "alpha", "cubic-gauss");
    require_positive(beta, "beta", "cubic-gauss");
    require_blend(C, "cubic-gauss");
    ParamMap params{{"alpha", alpha}, {"beta", beta}, {"C", C}};
    if (C == 0.0) return rename(gaussian_well(beta), "cubic-gauss", params);
    if (C == 1.0) return rename(cubic(alpha), "cubic-gauss", params);
    // Build the well without the β > 1 check: the cubic confines for any C > 0.
    PotentialSpec well;
    well.eval = [beta](double r) { return -beta * std::exp(-r * r); };
    well.deriv1 = [beta](double r) { return 2.0 * beta * r * std::exp(-r * r); };
    well.deriv2 = [beta](double r) { return 2.0 * beta * (1.0 - 2.0 * r * r) * std::exp(-r * r); };
    well.pair_mean = [beta](double c) { return -beta * std::pow(c / (c + 1.0), 1.5); };
    auto p = blend(cubic(alpha), C, well, 1.0 - C);
    p.family = "cubic-gauss";
    p.params = params;
    // b_V'' = (3/4) α C y^{-1/2} - β (1-C) e^{-y}; the ratio y^{-1/2} e^{y} is
    // smallest at y = 1/2, where it equals √2 e^{1/2}.
    const double threshold = 0.75 * std::numbers::sqrt2 * std::exp(0.5);
    p.bV_curvature = beta * (1.0 - C) / (alpha * C) > threshold ? Curvature::Indefinite : Curvature::Positive;
    return p;
}

std::span<const std::string_view> potential_ids() { return kIds; }

ParamMap family_defaults(std::string_view id) {
    for (const auto& f : kFamilies) {
        if (f.id != id) continue;
        ParamMap out;
        for (int i = 0; i < f.count; ++i) out.emplace(std::string(f.defaults[i].first), f.defaults[i].second);
        return out;
    }
    throw Error(ErrorKind::Usage, "unknown potential id '" + std::string(id) + "'");
}

PotentialSpec make_potential(std::string_view id, const ParamMap& params) {
    ParamMap merged = family_defaults(id);
    for (const auto& [key, value] : params) {
        auto it = merged.find(key);
        if (it == merged.end()) {
            throw Error(ErrorKind::Usage, "potential '" + std::string(id) + "' takes no parameter '" + key + "'");
        }
        it->second = value;
    }
    for (const auto& [key, value] : merged) {
        if (std::isnan(value)) {
            throw Error(ErrorKind::Usage, "potential '" + std::string(id) + "' requires parameter '" + key + "'");
        }
    }
    auto get = [&](const char* key) { return merged.at(key); };
    if (id == "power") return power_law(get("G"), get("beta"));
    if (id == "trunc-coulomb") return truncated_coulomb(get("c"), get("d"));
    if (id == "exciton") return exciton(get("c"), get("d"));
    if (id == "linear") return linear(get("beta"));
    if (id == "cubic") return cubic(get("alpha"));
    if (id == "log") return logarithmic(get("beta"));
    if (id == "gauss") return gaussian_well(get("beta"));
    if (id == "cubic-linear") return cubic_linear(get("alpha"), get("beta"), get("C"));
    if (id == "cubic-log") return cubic_log(get("alpha"), get("beta"), get("C"));
    return cubic_gauss(get("alpha"), get("beta"), get("C"));
}

std::vector<double> default_curvature_samples() {
    constexpr int n = 200;
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) {
        const double r = std::pow(10.0, -3.0 + 6.0 * i / (n - 1));
        y[static_cast<std::size_t>(i)] = r * r;
    }
    return y;
}

Curvature bV_curvature_sign(const PotentialSpec& potential, std::span<const double> y_samples) {
    return sample_sign(potential.deriv1, potential.deriv2, y_samples, "potential");
}

Curvature bT_curvature_sign(const KinematicsSpec& kinematics, std::span<const double> y_samples) {
    return sample_sign(kinematics.deriv1, kinematics.deriv2, y_samples, "kinetic");
}

VariationalCharacter classify_character(Curvature bT, Curvature bV) {
    if (bT == Curvature::Indefinite || bV == Curvature::Indefinite) return VariationalCharacter::Undefined;
    if (bT == Curvature::Zero && bV == Curvature::Zero) return VariationalCharacter::Exact;
    const Curvature governing = bT == Curvature::Zero ? bV : bT;
    if (bV != Curvature::Zero && bT != Curvature::Zero && bT != bV) return VariationalCharacter::Undefined;
    return governing == Curvature::Negative ? VariationalCharacter::UpperBound : VariationalCharacter::LowerBound;
}

VariationalCharacter classify_character(const KinematicsSpec& kin, const PotentialSpec& pot) {
    return classify_character(kin.bT_curvature, pot.bV_curvature);
}

}  // namespace etk
