#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace testkit {

using hcsf::Matrix;
using hcsf::Vec;

Matrix random_symmetric(Rng& rng, std::size_t n, double scale) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double v = rng.uniform(-scale, scale);
            m(i, j) = v;
            m(j, i) = v;
        }
    return m;
}

Vec random_vec(Rng& rng, std::size_t n, double lo, double hi) {
    Vec v(n);
    for (double& x : v) x = rng.uniform(lo, hi);
    return v;
}

namespace {

double det_shifted(Matrix a, double x) {
    const std::size_t n = a.rows();
    for (std::size_t i = 0; i < n; ++i) a(i, i) -= x;
    double det = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(a(r, col)) > std::fabs(a(pivot, col))) pivot = r;
        if (a(pivot, col) == 0.0) return 0.0;
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a(pivot, c), a(col, c));
            det = -det;
        }
        det *= a(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a(r, col) / a(col, col);
            for (std::size_t c = col; c < n; ++c) a(r, c) -= f * a(col, c);
        }
    }
    return det;
}

}  // namespace

std::vector<double> eigenvalues_by_bisection(const Matrix& m, double tol) {
    const std::size_t n = m.rows();
    // Gershgorin bound
    double radius = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        for (std::size_t j = 0; j < n; ++j) r += std::fabs(m(i, j));
        radius = std::max(radius, r);
    }
    radius += 1.0;

    std::vector<double> roots;
    for (std::size_t grid = 4096; roots.size() != n && grid <= 1u << 20; grid *= 4) {
        roots.clear();
        double prev_x = -radius;
        double prev_f = det_shifted(m, prev_x);
        for (std::size_t k = 1; k <= grid; ++k) {
            const double x = -radius + 2.0 * radius * static_cast<double>(k) / static_cast<double>(grid);
            const double f = det_shifted(m, x);
            if ((prev_f < 0.0 && f > 0.0) || (prev_f > 0.0 && f < 0.0) || f == 0.0) {
                double lo = prev_x, hi = x, flo = prev_f;
                while (hi - lo > tol) {
                    const double mid = 0.5 * (lo + hi);
                    const double fm = det_shifted(m, mid);
                    if ((flo < 0.0) == (fm < 0.0)) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                roots.push_back(0.5 * (lo + hi));
            }
            prev_x = x;
            prev_f = f;
        }
    }
    if (roots.size() != n)
        throw std::runtime_error("eigenvalue oracle: failed to isolate all roots (clustered spectrum?)");
    std::sort(roots.begin(), roots.end());
    return roots;
}

Vec solve_dense(Matrix a, Vec b) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n) throw std::invalid_argument("solve_dense: dimension mismatch");
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(a(r, col)) > std::fabs(a(pivot, col))) pivot = r;
        if (a(pivot, col) == 0.0) throw std::runtime_error("solve_dense: singular system");
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a(pivot, c), a(col, c));
            std::swap(b[pivot], b[col]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a(r, col) / a(col, col);
            for (std::size_t c = col; c < n; ++c) a(r, c) -= f * a(col, c);
            b[r] -= f * b[col];
        }
    }
    Vec x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return x;
}

Matrix right_pseudo_inverse(const Matrix& g) {
    const Matrix gram = g * hcsf::transpose(g);
    // Columns of the inverse Gram, solved one rhs at a time.
    const std::size_t r = gram.rows();
    Matrix inv(r, r);
    for (std::size_t j = 0; j < r; ++j) {
        Vec e(r, 0.0);
        e[j] = 1.0;
        const Vec col = solve_dense(gram, e);
        for (std::size_t i = 0; i < r; ++i) inv(i, j) = col[i];
    }
    return hcsf::transpose(g) * inv;
}

Vec qp_min_norm_oracle(const Vec& a, double c) {
    const std::size_t n = a.size();
    if (c <= 0.0) return Vec(n, 0.0);
    // KKT system of min T.T s.t. a.T = -c:  [2I a; a^T 0] [T; mu] = [0; -c]
    Matrix kkt(n + 1, n + 1);
    Vec rhs(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        kkt(i, i) = 2.0;
        kkt(i, n) = a[i];
        kkt(n, i) = a[i];
    }
    rhs[n] = -c;
    Vec sol = solve_dense(kkt, rhs);
    sol.resize(n);
    return sol;
}

Vec coulomb_relative_accel(const hcsf::FormationModel& model, const Vec& xi_tilde,
                           const Vec& charges) {
    const std::size_t d = model.dim;
    const std::size_t n = model.count;
    std::vector<Vec> pos(n, Vec(d, 0.0));
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t k = 0; k < d; ++k) pos[i][k] = xi_tilde[(i - 1) * d + k];

    auto accel_of = [&](std::size_t i) {
        Vec acc(d, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            double r2 = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                const double diff = pos[i][k] - pos[j][k];
                r2 += diff * diff;
            }
            const double r = std::sqrt(r2);
            const double coef = model.kappa_c / model.masses[i] * charges[i] * charges[j] / (r * r2);
            for (std::size_t k = 0; k < d; ++k) acc[k] += coef * (pos[i][k] - pos[j][k]);
        }
        return acc;
    };

    const Vec acc1 = accel_of(0);
    Vec out(model.rel_dim());
    for (std::size_t i = 1; i < n; ++i) {
        const Vec acci = accel_of(i);
        for (std::size_t k = 0; k < d; ++k) out[(i - 1) * d + k] = acci[k] - acc1[k];
    }
    return out;
}

namespace {

// Minimal local RK4 on the absolute dynamics, independent of hcsf::step.
hcsf::AbsoluteState rk4_local(const hcsf::FormationModel& model, hcsf::AbsoluteState s,
                              const hcsf::Inputs& u, double h, int steps) {
    for (int n = 0; n < steps; ++n) {
        const Vec a1 = hcsf::full_dynamics(model, s, u);
        hcsf::AbsoluteState s2 = s;
        for (std::size_t i = 0; i < s.positions.size(); ++i) {
            s2.positions[i] += 0.5 * h * s.velocities[i];
            s2.velocities[i] += 0.5 * h * a1[i];
        }
        const Vec a2 = hcsf::full_dynamics(model, s2, u);
        hcsf::AbsoluteState s3 = s;
        for (std::size_t i = 0; i < s.positions.size(); ++i) {
            s3.positions[i] += 0.5 * h * s2.velocities[i];
            s3.velocities[i] += 0.5 * h * a2[i];
        }
        const Vec a3 = hcsf::full_dynamics(model, s3, u);
        hcsf::AbsoluteState s4 = s;
        for (std::size_t i = 0; i < s.positions.size(); ++i) {
            s4.positions[i] += h * s3.velocities[i];
            s4.velocities[i] += h * a3[i];
        }
        const Vec a4 = hcsf::full_dynamics(model, s4, u);
        for (std::size_t i = 0; i < s.positions.size(); ++i) {
            s.positions[i] +=
                h / 6.0 * (s.velocities[i] + 2.0 * s2.velocities[i] + 2.0 * s3.velocities[i] +
                           s4.velocities[i]);
            s.velocities[i] += h / 6.0 * (a1[i] + 2.0 * a2[i] + 2.0 * a3[i] + a4[i]);
        }
    }
    return s;
}

hcsf::AbsoluteState absolute_from_error(const hcsf::FormationModel& model,
                                        const hcsf::DesiredConfiguration& des,
                                        const hcsf::ErrorState& e) {
    const std::size_t d = model.dim;
    hcsf::AbsoluteState s;
    s.positions.assign(model.count * d, 0.0);
    s.velocities.assign(model.count * d, 0.0);
    for (std::size_t i = 1; i < model.count; ++i)
        for (std::size_t k = 0; k < d; ++k) {
            s.positions[i * d + k] = e.xi[(i - 1) * d + k] + des.xi_des[(i - 1) * d + k];
            s.velocities[i * d + k] = e.nu[(i - 1) * d + k];
        }
    return s;
}

double v_of(const hcsf::FormationModel& model, const hcsf::DesiredConfiguration& des,
            const hcsf::QuadraticCLF& clf, const hcsf::AbsoluteState& s) {
    const hcsf::ErrorState e = hcsf::relative_from_absolute(model, s, des);
    const Vec big = e.stacked();
    return hcsf::dot(big, hcsf::matvec(clf.P, big));
}

}  // namespace

double fd_vdot(const hcsf::FormationModel& model, const hcsf::DesiredConfiguration& des,
               const hcsf::QuadraticCLF& clf, const hcsf::ErrorState& state,
               const hcsf::Inputs& inputs, double h) {
    const hcsf::AbsoluteState s0 = absolute_from_error(model, des, state);
    const hcsf::AbsoluteState fwd = rk4_local(model, s0, inputs, h, 1);
    // Backward in time: integrate the reversed vector field.
    const hcsf::AbsoluteState bwd = rk4_local(model, s0, inputs, -h, 1);
    return (v_of(model, des, clf, fwd) - v_of(model, des, clf, bwd)) / (2.0 * h);
}

hcsf::FormationModel square4_model() {
    hcsf::FormationModel m;
    m.count = 4;
    m.dim = 2;
    m.masses = {100.0, 96.0, 130.0, 100.0};
    return m;
}

hcsf::AbsoluteState square4_initial() {
    hcsf::AbsoluteState s;
    s.positions = {-100.0, -90.0, -50.0, 30.0, 100.0, 60.0, 100.0, -60.0};
    s.velocities.assign(8, 0.0);
    return s;
}

hcsf::DesiredConfiguration square4_desired() {
    return hcsf::DesiredConfiguration{{0.0, 150.0, 150.0, 150.0, 150.0, 0.0}};
}

hcsf::QuadraticCLF square4_clf() {
    return hcsf::QuadraticCLF{hcsf::default_clf_matrix(square4_model()), 0.01};
}

hcsf::QuadraticCLF strict_clf(const hcsf::FormationModel& model) {
    const std::size_t n = model.rel_dim();
    Matrix p(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        p(i, i) = 0.995057;
        p(n + i, n + i) = 0.995057;
        p(i, n + i) = 0.006;
        p(n + i, i) = 0.006;
    }
    return hcsf::QuadraticCLF{p, 0.01};
}

RandomCase random_case(Rng& rng, std::size_t count, std::size_t dim) {
    RandomCase rc;
    rc.model.count = count;
    rc.model.dim = dim;
    rc.model.masses = random_vec(rng, count, 50.0, 200.0);

    // Well-separated positions: craft i near a lattice site with jitter.
    auto spread_config = [&](double spacing) {
        Vec cfg((count - 1) * dim);
        for (std::size_t i = 0; i + 1 < count; ++i)
            for (std::size_t k = 0; k < dim; ++k)
                cfg[i * dim + k] = (k == 0 ? spacing * static_cast<double>(i + 1) : 0.0) +
                                   rng.uniform(-0.3 * spacing, 0.3 * spacing);
        return cfg;
    };
    rc.desired.xi_des = spread_config(120.0);
    const Vec xi_tilde = spread_config(100.0);
    rc.state.xi = hcsf::vec_sub(xi_tilde, rc.desired.xi_des);
    rc.state.nu = random_vec(rng, (count - 1) * dim, -1.0, 1.0);
    return rc;
}

}  // namespace testkit
