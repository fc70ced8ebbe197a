#pragma once

#include <span>
#include <string>
#include <vector>

#include "etk/character.hpp"
#include "etk/potentials.hpp"

namespace etk {

/// Radial and orbital quantum numbers of one internal Jacobi coordinate.
struct JacobiQuanta {
    int n = 0;
    int l = 0;

    friend bool operator==(const JacobiQuanta&, const JacobiQuanta&) = default;
};

/// The N-1 (n, l) pairs of an N-body state.
class QuantumNumbers {
public:
    QuantumNumbers() = default;
    explicit QuantumNumbers(std::vector<JacobiQuanta> pairs);

    /// Bosonic ground state: all n = l = 0.
    static QuantumNumbers ground(int N);

    /// Parses "bgs" or "n,l;n,l;..." into a state for N particles.
    static QuantumNumbers parse(const std::string& text, int N);

    std::span<const JacobiQuanta> pairs() const { return pairs_; }
    std::size_t size() const { return pairs_.size(); }
    bool is_ground() const;
    std::string to_string() const;

private:
    std::vector<JacobiQuanta> pairs_;
};

struct SystemSpec {
    int N = 3;
    double m = 1.0;
    int D = 3;
    KinematicsSpec kinematics;
    PotentialSpec potential;
    QuantumNumbers state;

    /// Throws InvalidSystem when any invariant is broken.
    void validate() const;
};

/// N identical non-relativistic particles of mass m in the given state.
SystemSpec make_system(int N, double m, int D, PotentialSpec potential, QuantumNumbers state);

/// Three-boson ground state at D=3, m=1: the configuration of every figure.
SystemSpec three_boson_system(PotentialSpec potential);

struct EnvelopeSolution {
    double energy = 0.0;
    double p0 = 0.0;
    double rho0 = 0.0;
    double Q_used = 0.0;
    double phi_used = 2.0;
    VariationalCharacter character = VariationalCharacter::Undefined;
    int root_count = 0;
};

/// Legacy radius r0 with r0² = C_N² ρ0².
double legacy_r0(const EnvelopeSolution& solution, int N);

/// Number of particle pairs C_N² = N(N-1)/2.
int pair_count(int N);

/// Q_φ(N) = Σ (φ n + l + (D+φ-2)/2) for D ≥ 2, Σ (n + 1/2) for D = 1.
/// At D = 1 only φ = 2 is accepted.
double global_Q(const QuantumNumbers& state, int D, double phi);

/// λ = Σ (l + (D-2)/2), the orbital-only combination used by the φ improvement.
double orbital_lambda(const QuantumNumbers& state, int D);

}  // namespace etk
