#pragma once

#include <cstdint>
#include <vector>

#include "hcsf/allocator.hpp"
#include "hcsf/clf.hpp"
#include "hcsf/formation.hpp"
#include "hcsf/linalg.hpp"

// Test-only oracles and generators. Everything here is deliberately
// independent of the library code paths it is used to check.
namespace testkit {

// splitmix64: deterministic across platforms, unlike the standard
// distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(next_u64() % n); }

private:
    std::uint64_t state_;
};

hcsf::Matrix random_symmetric(Rng& rng, std::size_t n, double scale);
hcsf::Vec random_vec(Rng& rng, std::size_t n, double lo, double hi);

// det(M - x I) sign-change bisection. Valid for symmetric matrices with
// well-separated eigenvalues; returns all n roots ascending.
std::vector<double> eigenvalues_by_bisection(const hcsf::Matrix& m, double tol);

// Gaussian elimination with partial pivoting.
hcsf::Vec solve_dense(hcsf::Matrix a, hcsf::Vec b);

// Right pseudo-inverse via normal equations: G^T (G G^T)^{-1}.
hcsf::Matrix right_pseudo_inverse(const hcsf::Matrix& g);

// min ||T||^2 subject to c + a.T <= 0, solved through the KKT system of the
// generic equality-constrained QP (not the closed form under test).
hcsf::Vec qp_min_norm_oracle(const hcsf::Vec& a, double c);

// Stacked relative Coulomb accelerations (craft 2..N minus craft 1) by
// direct pairwise summation over the charge products.
hcsf::Vec coulomb_relative_accel(const hcsf::FormationModel& model, const hcsf::Vec& xi_tilde,
                                 const hcsf::Vec& charges);

// Central finite difference of V along the true dynamics under constant
// inputs, using a local RK4 integrator.
double fd_vdot(const hcsf::FormationModel& model, const hcsf::DesiredConfiguration& des,
               const hcsf::QuadraticCLF& clf, const hcsf::ErrorState& state,
               const hcsf::Inputs& inputs, double h);

// The four-craft square reconfiguration scenario used throughout.
hcsf::FormationModel square4_model();
hcsf::AbsoluteState square4_initial();
hcsf::DesiredConfiguration square4_desired();
hcsf::QuadraticCLF square4_clf();

// A CLF that satisfies the decrease condition with strictly negative
// margin (heavier position-velocity coupling than the stock weights).
hcsf::QuadraticCLF strict_clf(const hcsf::FormationModel& model);

// Random collision-free formation and error state for property tests.
struct RandomCase {
    hcsf::FormationModel model;
    hcsf::DesiredConfiguration desired;
    hcsf::ErrorState state;
};
RandomCase random_case(Rng& rng, std::size_t count, std::size_t dim);

}  // namespace testkit
