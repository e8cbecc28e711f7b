#include "hcsf/formation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "hcsf/errors.hpp"

namespace hcsf {

void FormationModel::validate() const {
    if (count < 2) throw std::invalid_argument("formation: need at least 2 spacecraft");
    if (dim < 1 || dim > 3) throw std::invalid_argument("formation: embedding dimension must be 1, 2 or 3");
    if (masses.size() != count) throw std::invalid_argument("formation: expected one mass per craft");
    for (std::size_t i = 0; i < masses.size(); ++i)
        if (!(masses[i] > 0.0))
            throw std::invalid_argument("formation: masses[" + std::to_string(i) + "] must be > 0");
    if (!(kappa_c > 0.0)) throw std::invalid_argument("formation: kappa_c must be > 0");
    if (!(min_separation > 0.0)) throw std::invalid_argument("formation: min_separation must be > 0");
}

void DesiredConfiguration::validate(const FormationModel& model) const {
    if (xi_des.size() != model.rel_dim())
        throw std::invalid_argument("desired configuration: expected length " +
                                    std::to_string(model.rel_dim()));
    // Desired positions are {0, xi_des blocks}; all pairs must be separated.
    const std::size_t d = model.dim;
    auto block = [&](std::size_t i, std::size_t k) {
        return i == 0 ? 0.0 : xi_des[(i - 1) * d + k];
    };
    for (std::size_t i = 0; i < model.count; ++i)
        for (std::size_t j = i + 1; j < model.count; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                const double diff = block(i, k) - block(j, k);
                s += diff * diff;
            }
            if (!(std::sqrt(s) > 0.0))
                throw std::invalid_argument("desired configuration: craft " + std::to_string(i + 1) +
                                            " and " + std::to_string(j + 1) + " coincide");
        }
}

Vec ErrorState::stacked() const {
    Vec out(xi.size() + nu.size());
    std::copy(xi.begin(), xi.end(), out.begin());
    std::copy(nu.begin(), nu.end(), out.begin() + static_cast<std::ptrdiff_t>(xi.size()));
    return out;
}

Inputs Inputs::zero(const FormationModel& model) {
    return Inputs{Vec(model.count, 0.0), Vec(model.count * model.dim, 0.0)};
}

ErrorState relative_from_absolute(const FormationModel& model, const AbsoluteState& s,
                                  const DesiredConfiguration& des) {
    const std::size_t d = model.dim;
    const std::size_t n = model.count;
    if (s.positions.size() != n * d || s.velocities.size() != n * d)
        throw std::invalid_argument("state: expected " + std::to_string(n * d) +
                                    " position and velocity entries");
    if (des.xi_des.size() != model.rel_dim())
        throw std::invalid_argument("desired configuration: dimension mismatch");

    ErrorState e;
    e.xi.resize(model.rel_dim());
    e.nu.resize(model.rel_dim());
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t k = 0; k < d; ++k) {
            e.xi[i * d + k] = (s.positions[(i + 1) * d + k] - s.positions[k]) - des.xi_des[i * d + k];
            e.nu[i * d + k] = s.velocities[(i + 1) * d + k] - s.velocities[k];
        }
    return e;
}

Matrix gt_matrix(const FormationModel& model) {
    const std::size_t d = model.dim;
    Matrix g(model.rel_dim(), model.count * d);
    for (std::size_t i = 0; i + 1 < model.count; ++i)
        for (std::size_t k = 0; k < d; ++k) {
            g(i * d + k, k) = -1.0 / model.masses[0];
            g(i * d + k, (i + 1) * d + k) = 1.0 / model.masses[i + 1];
        }
    return g;
}

namespace {

// Positions implied by xi_tilde with craft 1 at the origin.
Vec positions_from_relative(const FormationModel& model, const Vec& xi_tilde) {
    if (xi_tilde.size() != model.rel_dim())
        throw std::invalid_argument("relative positions: expected length " +
                                    std::to_string(model.rel_dim()));
    Vec x(model.count * model.dim, 0.0);
    std::copy(xi_tilde.begin(), xi_tilde.end(), x.begin() + static_cast<std::ptrdiff_t>(model.dim));
    return x;
}

double pair_distance(const Vec& x, std::size_t d, std::size_t i, std::size_t j) {
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        const double diff = x[i * d + k] - x[j * d + k];
        s += diff * diff;
    }
    return std::sqrt(s);
}

void check_separations(const FormationModel& model, const Vec& x, double time) {
    for (std::size_t i = 0; i < model.count; ++i)
        for (std::size_t j = i + 1; j < model.count; ++j) {
            const double r = pair_distance(x, model.dim, i, j);
            if (r < model.min_separation) throw SingularityError(i, j, r, time);
        }
}

}  // namespace

Matrix gc_matrix(const FormationModel& model, const Vec& xi_tilde) {
    const std::size_t d = model.dim;
    const std::size_t n = model.count;
    const Vec x = positions_from_relative(model, xi_tilde);
    check_separations(model, x, -1.0);

    Matrix g(model.rel_dim(), n * n);
    // Adds half the Coulomb coefficient of the charge product q_p q_j to
    // each of the two vec columns carrying that product, with sign `sgn`,
    // into block row `row`.
    auto add_pair = [&](std::size_t row, std::size_t p, std::size_t j, double sgn) {
        const double r = pair_distance(x, d, p, j);
        const double inv_r3 = 1.0 / (r * r * r);
        for (std::size_t k = 0; k < d; ++k) {
            const double w =
                sgn * 0.5 * (model.kappa_c / model.masses[p]) * (x[p * d + k] - x[j * d + k]) * inv_r3;
            g(row * d + k, j * n + p) += w;
            g(row * d + k, p * n + j) += w;
        }
    };

    for (std::size_t i = 0; i + 1 < n; ++i) {
        const std::size_t p = i + 1;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != p) add_pair(i, p, j, +1.0);
            if (j != 0) add_pair(i, 0, j, -1.0);
        }
    }
    return g;
}

Vec full_dynamics(const FormationModel& model, const AbsoluteState& s, const Inputs& inputs) {
    const std::size_t d = model.dim;
    const std::size_t n = model.count;
    if (inputs.charges.size() != n || inputs.thrusts.size() != n * d)
        throw std::invalid_argument("inputs: expected " + std::to_string(n) + " charges and " +
                                    std::to_string(n * d) + " thrust entries");
    check_separations(model, s.positions, -1.0);

    Vec acc(n * d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double r = pair_distance(s.positions, d, i, j);
            const double coef =
                model.kappa_c / model.masses[i] * inputs.charges[i] * inputs.charges[j] / (r * r * r);
            for (std::size_t k = 0; k < d; ++k)
                acc[i * d + k] += coef * (s.positions[i * d + k] - s.positions[j * d + k]);
        }
        for (std::size_t k = 0; k < d; ++k) acc[i * d + k] += inputs.thrusts[i * d + k] / model.masses[i];
    }
    return acc;
}

ErrorDynamicsMatrices error_dynamics_matrices(const FormationModel& model) {
    const std::size_t n = model.rel_dim();
    ErrorDynamicsMatrices out;
    out.A = Matrix(2 * n, 2 * n);
    out.B = Matrix(2 * n, n);
    for (std::size_t i = 0; i < n; ++i) {
        out.A(i, n + i) = 1.0;
        out.B(n + i, i) = 1.0;
    }
    return out;
}

}  // namespace hcsf
