#include "etk/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/minima.hpp>

#include "etk/error.hpp"

namespace etk {

namespace {

using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;

// Particle positions relative to the centre of mass as rows of coefficients
// on (x, y): r1 = x/2 + y/3, r2 = -x/2 + y/3, r3 = -2y/3.
const std::array<Vec2, 3> kPositions{Vec2(0.5, 1.0 / 3.0), Vec2(-0.5, 1.0 / 3.0), Vec2(0.0, -2.0 / 3.0)};

// Relative vectors r1-r2, r1-r3, r2-r3 on (x, y).
const std::array<Vec2, 3> kPairs{Vec2(1.0, 0.0), Vec2(0.5, 1.0), Vec2(-0.5, 1.0)};

// Jacobi coordinates after relabelling (1,2,3) -> (a,b,c).
Mat2 relabel(int a, int b, int c) {
    Mat2 t;
    t.row(0) = (kPositions[a] - kPositions[b]).transpose();
    t.row(1) = (0.5 * (kPositions[a] + kPositions[b]) - kPositions[c]).transpose();
    return t;
}

// Cyclic relabellings first, then the odd ones.
const std::array<Mat2, 6> kRelabel{relabel(0, 1, 2), relabel(1, 2, 0), relabel(2, 0, 1),
                                   relabel(1, 0, 2), relabel(0, 2, 1), relabel(2, 1, 0)};

struct ElementTerms {
    double overlap = 0.0;
    double kinetic = 0.0;
    double potential = 0.0;
};

class PairMean {
public:
    PairMean(const PotentialSpec& potential, bool analytic) : potential_(potential), analytic_(analytic) {}

    double operator()(double c) const {
        if (analytic_ && potential_.pair_mean) return potential_.pair_mean(c);
        return pair_mean_quadrature(potential_, c);
    }

private:
    const PotentialSpec& potential_;
    bool analytic_;
};

// Incrementally grown, greedily pruned basis of symmetrised Gaussians.
class Basis {
public:
    Basis(const SystemSpec& spec, double cond_cap, bool analytic, int start_perm)
        : mean_(spec.potential, analytic), cond_cap_(cond_cap) {
        const double m = spec.m;
        lambda_ << 2.0 / m, 0.0, 0.0, 1.5 / m;
        const Mat2& start = kRelabel[static_cast<std::size_t>(start_perm)];
        for (int p = 0; p < 3; ++p) ket_maps_[static_cast<std::size_t>(p)] = start * kRelabel[static_cast<std::size_t>(p)];
        bra_map_ = start;
    }

    void add(const std::vector<detail::Width>& candidates) {
        for (const auto& w : candidates) try_add(w);
    }

    const std::vector<detail::Width>& kept() const { return kept_; }

    double lowest_energy() {
        const auto n = static_cast<Eigen::Index>(kept_.size());
        if (n == 0) throw Error(ErrorKind::Domain, "oracle basis is empty");
        extend_hamiltonian();
        const Eigen::MatrixXd L = chol_.topLeftCorner(n, n);
        Eigen::MatrixXd H = ham_.topLeftCorner(n, n).selfadjointView<Eigen::Lower>();
        // M = L⁻¹ H L⁻ᵀ
        const auto tri = L.triangularView<Eigen::Lower>();
        tri.solveInPlace(H);
        Eigen::MatrixXd M = H.transpose();
        tri.solveInPlace(M);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M, Eigen::EigenvaluesOnly);
        if (eig.info() != Eigen::Success) throw Error(ErrorKind::Domain, "oracle eigensolver failed");
        return eig.eigenvalues()(0);
    }

private:
    Mat2 width_matrix(const detail::Width& w, const Mat2& map) const {
        const Mat2 d = Vec2(w.a, w.b).asDiagonal();
        return map.transpose() * d * map;
    }

    // Σ over cyclic relabellings of the ket, unnormalised.
    ElementTerms element(const detail::Width& bra, const detail::Width& ket, bool with_h) const {
        const Mat2 A = width_matrix(bra, bra_map_);
        ElementTerms out;
        for (const Mat2& map : ket_maps_) {
            const Mat2 B = width_matrix(ket, map);
            const Mat2 C = A + B;
            const double det = C.determinant();
            const Mat2 Cinv = C.inverse();
            const double s = std::pow(det, -1.5);
            out.overlap += s;
            if (!with_h) continue;
            out.kinetic += 1.5 * (A * Cinv * B * lambda_).trace() * s;
            double v = 0.0;
            for (const Vec2& w : kPairs) v += mean_(0.5 / w.dot(Cinv * w));
            out.potential += v * s;
        }
        return out;
    }

    void try_add(const detail::Width& w) {
        const auto n = static_cast<Eigen::Index>(kept_.size());
        const double self = element(w, w, false).overlap;
        Eigen::VectorXd row(n);
        for (Eigen::Index j = 0; j < n; ++j) {
            row(j) = element(w, kept_[static_cast<std::size_t>(j)], false).overlap /
                     std::sqrt(self * self_overlap_[static_cast<std::size_t>(j)]);
        }
        // Forward substitution for the new Cholesky row.
        for (Eigen::Index j = 0; j < n; ++j) {
            row(j) = (row(j) - row.head(j).dot(chol_.row(j).head(j))) / chol_(j, j);
        }
        const double pivot = 1.0 - row.squaredNorm();
        if (!(pivot > 1.0 / cond_cap_)) return;
        if (chol_.rows() <= n) {
            const Eigen::Index cap = std::max<Eigen::Index>(64, 2 * (n + 1));
            chol_.conservativeResize(cap, cap);
        }
        chol_.row(n).head(n) = row.transpose();
        chol_(n, n) = std::sqrt(pivot);
        kept_.push_back(w);
        self_overlap_.push_back(self);
    }

    void extend_hamiltonian() {
        const auto n = static_cast<Eigen::Index>(kept_.size());
        const Eigen::Index done = ham_rows_;
        if (done == n) return;
        Eigen::MatrixXd grown = Eigen::MatrixXd::Zero(n, n);
        grown.topLeftCorner(done, done) = ham_.topLeftCorner(done, done);
        for (Eigen::Index i = done; i < n; ++i) {
            for (Eigen::Index j = 0; j <= i; ++j) {
                const auto iu = static_cast<std::size_t>(i);
                const auto ju = static_cast<std::size_t>(j);
                const ElementTerms t = element(kept_[iu], kept_[ju], true);
                grown(i, j) = (t.kinetic + t.potential) / std::sqrt(self_overlap_[iu] * self_overlap_[ju]);
            }
        }
        ham_ = std::move(grown);
        ham_rows_ = n;
    }

    PairMean mean_;
    double cond_cap_;
    Mat2 lambda_;
    Mat2 bra_map_;
    std::array<Mat2, 3> ket_maps_;
    std::vector<detail::Width> kept_;
    std::vector<double> self_overlap_;
    Eigen::MatrixXd chol_;
    Eigen::MatrixXd ham_;
    Eigen::Index ham_rows_ = 0;
};

std::vector<double> geometric(double lo, double hi, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = n == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    }
    return out;
}

// Grid points of refinement level `level` that are new relative to level-1.
std::vector<detail::Width> level_candidates(const GaussianBasisConfig& cfg, double scale, int level) {
    const int fa = (cfg.n_a - 1) * (1 << level) + 1;
    const int fb = (cfg.n_b - 1) * (1 << level) + 1;
    const auto as = geometric(cfg.a_min, cfg.a_max, fa);
    const auto bs = geometric(cfg.a_min, cfg.a_max, fb);
    std::vector<detail::Width> out;
    for (int i = 0; i < fa; ++i) {
        for (int j = 0; j < fb; ++j) {
            const bool old = level > 0 && i % 2 == 0 && j % 2 == 0;
            if (old) continue;
            // b carries the mass ratio of the two Jacobi coordinates, so that
            // the grid contains the harmonic ground state a = scale, b = 4 scale/3.
            out.push_back({as[static_cast<std::size_t>(i)] * scale, bs[static_cast<std::size_t>(j)] * scale * 4.0 / 3.0});
        }
    }
    return out;
}

void require_three_boson(const SystemSpec& spec) {
    spec.validate();
    if (spec.N != 3 || spec.D != 3 || !spec.state.is_ground()) {
        throw Error(ErrorKind::Parameter, "oracle covers the three-boson ground state at D=3 only");
    }
    if (spec.kinematics.family != "nonrel") {
        throw Error(ErrorKind::Parameter, "oracle requires non-relativistic kinematics");
    }
}

// Width a* minimising <H> for the single symmetric Gaussian
// exp(-½ a (x² + 4y²/3)), for which <H>(a) = 3a/m + 3 <V>_a.
// Returns 0 when no interior minimum exists on the scanned range.
double variational_anchor(const SystemSpec& spec, const PairMean& mean) {
    auto energy = [&](double log_a) {
        const double a = std::exp(log_a);
        const double e = 3.0 * a / spec.m + 3.0 * mean(a);
        return std::isfinite(e) ? e : std::numeric_limits<double>::infinity();
    };
    constexpr double lo = -25.0;
    constexpr double hi = 25.0;
    constexpr double step = 0.25;
    double best_t = lo;
    double best_e = energy(lo);
    for (double t = lo + step; t <= hi; t += step) {
        const double e = energy(t);
        if (e < best_e) {
            best_e = e;
            best_t = t;
        }
    }
    if (best_t <= lo || best_t >= hi - step) return 0.0;
    const auto found = boost::math::tools::brent_find_minima(energy, best_t - step, best_t + step, 40);
    return std::exp(found.first);
}

bool in_caution_band(const PotentialSpec& potential) {
    return potential.family == "power" && potential.param("beta") <= -1.6;
}

}  // namespace

void GaussianBasisConfig::validate() const {
    if (!(a_min > 0.0) || !(a_max > a_min)) throw Error(ErrorKind::Parameter, "oracle widths need 0 < a_min < a_max");
    if (n_a < 2 || n_b < 2 || n_a * n_b < 4) throw Error(ErrorKind::Parameter, "oracle grid too small");
    if (!(tol_rel > 0.0)) throw Error(ErrorKind::Parameter, "oracle tolerance must be positive");
    if (!(cond_cap > 1.0)) throw Error(ErrorKind::Parameter, "oracle conditioning cap must exceed 1");
    if (max_refinements < 0 || max_refinements > 4) throw Error(ErrorKind::Parameter, "refinements must be in [0, 4]");
    if (length_scale < 0.0) throw Error(ErrorKind::Parameter, "length scale must be non-negative");
}

double pair_mean_quadrature(const PotentialSpec& potential, double c) {
    if (!(c > 0.0)) throw Error(ErrorKind::Domain, "pair density width must be positive");
    static thread_local boost::math::quadrature::tanh_sinh<double> integrator(15);
    const double inv_sqrt_c = 1.0 / std::sqrt(c);
    // u = r √c;  <V> = 4/√π ∫ V(u/√c) u² e^{-u²} du
    // The weight u² removes any integrable singularity of V at the origin;
    // abscissae that close to 0 would only overflow V, so they contribute 0.
    auto f = [&](double u) {
        if (u < 1e-100) return 0.0;
        return potential.eval(u * inv_sqrt_c) * u * u * std::exp(-u * u);
    };
    double error = 0.0;
    const double value = integrator.integrate(f, 0.0, 10.0, 1e-14, &error);
    return 4.0 / std::sqrt(std::numbers::pi) * value;
}

double pair_mean(const PotentialSpec& potential, double c) {
    return PairMean(potential, true)(c);
}

double relative_error(double e_approx, double e_exact) {
    if (e_exact == 0.0) throw Error(ErrorKind::Undefined, "relative error undefined for a zero reference");
    return std::abs(e_approx - e_exact) / std::abs(e_exact);
}

namespace detail {

BasisSolve solve_basis(const SystemSpec& spec, const std::vector<Width>& candidates, double cond_cap, bool analytic,
                       int start_perm) {
    require_three_boson(spec);
    if (start_perm < 0 || start_perm > 5) throw Error(ErrorKind::Parameter, "start_perm must be in [0, 5]");
    Basis basis(spec, cond_cap, analytic, start_perm);
    basis.add(candidates);
    BasisSolve out;
    out.energy = basis.lowest_energy();
    out.kept = basis.kept();
    return out;
}

}  // namespace detail

OracleResult oracle_ground_energy(const SystemSpec& spec, const GaussianBasisConfig& config) {
    require_three_boson(spec);
    config.validate();

    double scale = 1.0;
    if (config.length_scale > 0.0) {
        scale = 1.0 / (config.length_scale * config.length_scale);
    } else if (const double a = variational_anchor(spec, PairMean(spec.potential, config.analytic_elements)); a > 0.0) {
        scale = a;
    }
    const double length = 1.0 / std::sqrt(scale);

    const bool cautious = in_caution_band(spec.potential);
    Basis basis(spec, config.cond_cap, config.analytic_elements, 0);
    OracleResult result;
    int passes = 0;
    for (int level = 0; level <= config.max_refinements; ++level) {
        basis.add(level_candidates(config, scale, level));
        const double energy = basis.lowest_energy();
        if (!result.history.empty()) {
            result.delta_last = std::abs(energy - result.history.back());
            passes = result.delta_last < config.tol_rel * std::abs(energy) ? passes + 1 : 0;
        }
        result.history.push_back(energy);
        result.energy = energy;
        result.basis_size = static_cast<int>(basis.kept().size());
        if (passes >= (cautious ? 2 : 1)) {
            result.converged = true;
            break;
        }
    }

    // Continuum threshold: all three particles far apart.
    const double far = 3.0 * spec.potential.eval(1e8 * length);
    result.bound = !(std::isfinite(far) && result.energy >= far);
    return result;
}

}  // namespace etk
