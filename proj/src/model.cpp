#include "etk/model.hpp"

#include <cmath>
#include <sstream>

#include "etk/error.hpp"

namespace etk {

QuantumNumbers::QuantumNumbers(std::vector<JacobiQuanta> pairs) : pairs_(std::move(pairs)) {
    for (const auto& q : pairs_) {
        if (q.n < 0 || q.l < 0) {
            throw Error(ErrorKind::InvalidSystem, "quantum numbers must be non-negative");
        }
    }
}

QuantumNumbers QuantumNumbers::ground(int N) {
    if (N < 2) throw Error(ErrorKind::InvalidSystem, "N must be at least 2");
    return QuantumNumbers(std::vector<JacobiQuanta>(static_cast<std::size_t>(N - 1)));
}

QuantumNumbers QuantumNumbers::parse(const std::string& text, int N) {
    if (text == "bgs") return ground(N);
    std::vector<JacobiQuanta> pairs;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ';')) {
        JacobiQuanta q;
        char comma = 0;
        std::istringstream field(item);
        if (!(field >> q.n >> comma >> q.l) || comma != ',' || !(field >> std::ws).eof()) {
            throw Error(ErrorKind::Usage, "malformed quantum number pair '" + item + "' (expected n,l)");
        }
        pairs.push_back(q);
    }
    if (static_cast<int>(pairs.size()) != N - 1) {
        throw Error(ErrorKind::InvalidSystem, "state needs exactly N-1 = " + std::to_string(N - 1) +
                                                  " (n,l) pairs, got " + std::to_string(pairs.size()));
    }
    return QuantumNumbers(std::move(pairs));
}

bool QuantumNumbers::is_ground() const {
    for (const auto& q : pairs_) {
        if (q.n != 0 || q.l != 0) return false;
    }
    return true;
}

std::string QuantumNumbers::to_string() const {
    if (is_ground()) return "bgs";
    std::string out;
    for (const auto& q : pairs_) {
        if (!out.empty()) out += ';';
        out += std::to_string(q.n) + "," + std::to_string(q.l);
    }
    return out;
}

void SystemSpec::validate() const {
    if (N < 2) throw Error(ErrorKind::InvalidSystem, "N must be at least 2");
    if (!(m > 0.0) || !std::isfinite(m)) throw Error(ErrorKind::InvalidSystem, "mass must be positive");
    if (D < 1) throw Error(ErrorKind::InvalidSystem, "dimension must be at least 1");
    if (static_cast<int>(state.size()) != N - 1) {
        throw Error(ErrorKind::InvalidSystem, "state must hold N-1 quantum number pairs");
    }
    if (D == 1) {
        for (const auto& q : state.pairs()) {
            if (q.l != 0) throw Error(ErrorKind::InvalidSystem, "orbital quantum numbers must vanish at D=1");
        }
    }
    if (!kinematics.eval || !kinematics.deriv1 || !kinematics.deriv2) {
        throw Error(ErrorKind::InvalidSystem, "kinematics is not evaluable");
    }
    if (!potential.eval || !potential.deriv1 || !potential.deriv2) {
        throw Error(ErrorKind::InvalidSystem, "potential is not evaluable");
    }
    if (kinematics.family == "nonrel" && kinematics.mass != m) {
        throw Error(ErrorKind::InvalidSystem, "kinematic mass differs from the particle mass");
    }
}

SystemSpec make_system(int N, double m, int D, PotentialSpec potential, QuantumNumbers state) {
    SystemSpec spec{N, m, D, nonrelativistic(m), std::move(potential), std::move(state)};
    spec.validate();
    return spec;
}

SystemSpec three_boson_system(PotentialSpec potential) {
    return make_system(3, 1.0, 3, std::move(potential), QuantumNumbers::ground(3));
}

int pair_count(int N) {
    if (N < 2) throw Error(ErrorKind::InvalidSystem, "N must be at least 2");
    return N * (N - 1) / 2;
}

double legacy_r0(const EnvelopeSolution& solution, int N) {
    return std::sqrt(static_cast<double>(pair_count(N))) * solution.rho0;
}

double global_Q(const QuantumNumbers& state, int D, double phi) {
    if (!(phi > 0.0)) throw Error(ErrorKind::Parameter, "phi must be positive");
    if (D < 1) throw Error(ErrorKind::InvalidSystem, "dimension must be at least 1");
    double Q = 0.0;
    if (D == 1) {
        if (phi != 2.0) {
            throw Error(ErrorKind::UnsupportedImprovement, "improvement unavailable at D=1");
        }
        for (const auto& q : state.pairs()) {
            if (q.l != 0) throw Error(ErrorKind::InvalidSystem, "orbital quantum numbers must vanish at D=1");
            Q += q.n + 0.5;
        }
        return Q;
    }
    for (const auto& q : state.pairs()) {
        Q += phi * q.n + q.l + (D + phi - 2.0) / 2.0;
    }
    return Q;
}

double orbital_lambda(const QuantumNumbers& state, int D) {
    if (D < 2) throw Error(ErrorKind::UnsupportedImprovement, "improvement unavailable at D=1");
    double lambda = 0.0;
    for (const auto& q : state.pairs()) lambda += q.l + (D - 2.0) / 2.0;
    return lambda;
}

}  // namespace etk
