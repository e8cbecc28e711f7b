#pragma once

#include "hcsf/linalg.hpp"

namespace hcsf {

inline constexpr double kCoulombConstant = 8.99e9;  // N m^2 / C^2
inline constexpr double kDefaultMinSeparation = 0.5;  // m

// A formation of `count` point-charge spacecraft embedded in R^dim
// (dim = 1 collinear, 2 coplanar, 3 three-dimensional). Immutable after
// construction; shared freely across parallel runs.
struct FormationModel {
    std::size_t count = 0;   // N >= 2
    std::size_t dim = 0;     // d in {1, 2, 3}
    Vec masses;              // kg, one per craft, all > 0
    double kappa_c = kCoulombConstant;  // override only for tests
    double min_separation = kDefaultMinSeparation;  // m, r_min > 0

    // d(N-1): dimension of the relative-position vector
    std::size_t rel_dim() const { return dim * (count - 1); }
    // 2 d(N-1): dimension of the stacked error state
    std::size_t state_dim() const { return 2 * rel_dim(); }

    void validate() const;
};

// Inertial positions and velocities of every craft, stacked per craft.
struct AbsoluteState {
    Vec positions;   // length N*d, m
    Vec velocities;  // length N*d, m/s
};

// Desired relative configuration: blocks are the target offsets of craft
// 2..N from craft 1.
struct DesiredConfiguration {
    Vec xi_des;  // length d(N-1), m

    void validate(const FormationModel& model) const;
};

// Error state relative to the desired configuration, Xi = Col(xi, nu).
struct ErrorState {
    Vec xi;  // length d(N-1), m
    Vec nu;  // length d(N-1), m/s

    Vec stacked() const;
};

// Control inputs: charges per craft and stacked thrusts.
struct Inputs {
    Vec charges;  // length N, C
    Vec thrusts;  // length N*d, N

    static Inputs zero(const FormationModel& model);
};

// Error state from absolute geometry: xi block i = (x_{i+1} - x_1) - xi_des
// block i, nu block i = v_{i+1} - v_1.
ErrorState relative_from_absolute(const FormationModel& model, const AbsoluteState& s,
                                  const DesiredConfiguration& des);

// Thrust input matrix of the relative dynamics, d(N-1) x dN:
// block row i is [-I_d/m_1, ..., I_d/m_{i+1}, ...]. Full row rank, hence
// right invertible.
Matrix gt_matrix(const FormationModel& model);

// Charge input matrix of the relative dynamics, d(N-1) x N^2, evaluated at
// the relative positions xi_tilde (craft 1 pinned at the origin; only
// relative positions enter the Coulomb terms). For every charge vector q,
// gc_matrix(xi_tilde) * vec(q q^T) is the stacked relative Coulomb
// acceleration. The coefficient of each pair (i, j) is split equally
// between the (i, j) and (j, i) columns, so columns of diagonal products
// q_a q_a are identically zero and the folded quadratic form has an exactly
// zero diagonal. Throws SingularityError if any pair is closer than
// model.min_separation.
Matrix gc_matrix(const FormationModel& model, const Vec& xi_tilde);

// Newtonian accelerations of every craft under Coulomb forces and thrusts,
// length N*d. The truth model for the simulator and the reference for
// gc_matrix. Throws SingularityError on pairs closer than min_separation.
Vec full_dynamics(const FormationModel& model, const AbsoluteState& s, const Inputs& inputs);

// Linear part of the error dynamics: A = [[0, I], [0, 0]] (2d(N-1) square)
// and B = [[0], [I]] (2d(N-1) x d(N-1)).
struct ErrorDynamicsMatrices {
    Matrix A;
    Matrix B;
};
ErrorDynamicsMatrices error_dynamics_matrices(const FormationModel& model);

}  // namespace hcsf
