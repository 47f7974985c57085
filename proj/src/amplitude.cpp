#include "bruss/amplitude.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bruss {

// ---- Dormand-Prince 5(4) -----------------------------------------------------

OdeStatus integrate_ode(const OdeRhs& f, std::vector<double>& y, double t0, double t1,
                        const OdeOptions& opts,
                        const std::function<void(double, const std::vector<double>&)>& observer) {
    static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    const std::size_t n = y.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), yt(n), ynew(n);
    double t = t0;
    double dt = std::min(opts.dt_init, t1 - t0);
    OdeStatus st;
    if (observer) observer(t, y);
    f(t, y, k1);

    while (t < t1) {
        if (++st.steps > opts.max_steps)
            throw std::runtime_error("integrate_ode: step limit exceeded");
        dt = std::min({dt, opts.dt_max, t1 - t});

        auto stage = [&](std::initializer_list<double> coefs,
                         std::initializer_list<const std::vector<double>*> ks,
                         std::vector<double>& out) {
            for (std::size_t i = 0; i < n; ++i) {
                double acc = y[i];
                auto ci = coefs.begin();
                for (auto kp : ks) acc += dt * (*ci++) * (*kp)[i];
                out[i] = acc;
            }
        };
        stage({a21}, {&k1}, yt);
        f(t + c2 * dt, yt, k2);
        stage({a31, a32}, {&k1, &k2}, yt);
        f(t + c3 * dt, yt, k3);
        stage({a41, a42, a43}, {&k1, &k2, &k3}, yt);
        f(t + c4 * dt, yt, k4);
        stage({a51, a52, a53, a54}, {&k1, &k2, &k3, &k4}, yt);
        f(t + c5 * dt, yt, k5);
        stage({a61, a62, a63, a64, a65}, {&k1, &k2, &k3, &k4, &k5}, yt);
        f(t + dt, yt, k6);
        stage({b1, 0.0, b3, b4, b5, b6}, {&k1, &k2, &k3, &k4, &k5, &k6}, ynew);
        f(t + dt, ynew, k7);

        double err = 0.0;
        bool finite = true;
        for (std::size_t i = 0; i < n; ++i) {
            const double ei = dt * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                    e6 * k6[i] + e7 * k7[i]);
            const double sc =
                opts.atol + opts.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err = std::max(err, std::abs(ei) / sc);
            if (!std::isfinite(ynew[i])) finite = false;
        }

        if (finite && err <= 1.0) {
            t += dt;
            y = ynew;
            k1 = k7;  // FSAL
            if (observer) observer(t, y);
            double sup = 0.0;
            for (double v : y) sup = std::max(sup, std::abs(v));
            if (sup > opts.divergence_bound) {
                st.diverged = true;
                return st;
            }
            dt *= std::min(5.0, 0.9 * std::pow(std::max(err, 1e-10), -0.2));
        } else {
            ++st.rejected;
            dt *= finite ? std::max(0.1, 0.9 * std::pow(err, -0.2)) : 0.1;
            if (dt < 1e-15 * std::max(1.0, std::abs(t))) {
                st.diverged = true;
                return st;
            }
        }
    }
    return st;
}

// ---- amplitude right-hand sides ----------------------------------------------

std::string stability_label(Stability s) {
    switch (s) {
        case Stability::stable: return "stable";
        case Stability::unstable: return "unstable";
        case Stability::saddle: return "saddle";
        case Stability::marginal: return "marginal";
    }
    return "?";
}

void amplitude_rhs(const AmplitudeModel& m, const GlGrid* grid, const std::vector<double>& A,
                   std::vector<double>& dA) {
    dA.assign(A.size(), 0.0);
    switch (m.kind) {
        case AmplitudeKind::cubic_sl: {
            const double a = A.at(0);
            dA[0] = m.sigma * a - m.L * a * a * a;
            return;
        }
        case AmplitudeKind::quintic_sl: {
            const double a = A.at(0);
            dA[0] = m.sigma_bar * a - m.L_bar * a * a * a + m.R_bar * a * a * a * a * a;
            return;
        }
        case AmplitudeKind::coupled: {
            const double a1 = A.at(0), a2 = A.at(1);
            dA[0] = m.sigma * a1 - m.L1 * a1 * a1 * a1 + m.R1 * a1 * a2 * a2;
            dA[1] = m.sigma * a2 - m.L2 * a2 * a2 * a2 + m.R2 * a1 * a1 * a2;
            return;
        }
        case AmplitudeKind::resonant: {
            const double a1 = A.at(0), a2 = A.at(1);
            dA[0] = m.sigma1 * a1 - m.L1 * a1 * a2 + m.R1 * a1 * a2 * a2 + m.S1 * a1 * a1 * a1;
            dA[1] = m.sigma2 * a2 - m.L2 * a1 * a1 + m.R2 * a1 * a1 * a2 + m.S2 * a2 * a2 * a2;
            return;
        }
        case AmplitudeKind::gl: {
            if (!grid) throw std::invalid_argument("amplitude_rhs: GL kind needs a grid");
            const int N = grid->N;
            if (static_cast<int>(A.size()) != N)
                throw std::invalid_argument("amplitude_rhs: GL state size mismatch");
            const double ih2 = 1.0 / (grid->h() * grid->h());
            for (int i = 0; i < N; ++i) {
                // no-flux ghost closure at the cell-centered ends
                const double left = i == 0 ? A[0] : A[i - 1];
                const double right = i == N - 1 ? A[N - 1] : A[i + 1];
                const double lap = (left - 2.0 * A[i] + right) * ih2;
                dA[i] = m.nu * lap + m.sigma * A[i] - m.L * A[i] * A[i] * A[i];
            }
            return;
        }
    }
    throw std::invalid_argument("amplitude_rhs: unknown model kind");
}

Trajectory integrate_amplitude(const AmplitudeModel& model, std::vector<double> init,
                               double T_end, double store_every, const GlGrid* grid,
                               const OdeOptions& opts) {
    Trajectory tr;
    double last_stored = -1e300;
    auto observer = [&](double t, const std::vector<double>& y) {
        if (store_every <= 0.0 || t - last_stored >= store_every - 1e-12 || t == T_end) {
            tr.states.push_back({t, y});
            last_stored = t;
        }
    };
    OdeOptions o = opts;
    if (o.divergence_bound > 1e9) o.divergence_bound = 1e9;
    const OdeRhs rhs = [&](double, const std::vector<double>& y, std::vector<double>& dy) {
        amplitude_rhs(model, grid, y, dy);
    };
    const OdeStatus st = integrate_ode(rhs, init, 0.0, T_end, o, observer);
    tr.diverged = st.diverged;
    return tr;
}

// ---- equilibria ---------------------------------------------------------------

namespace {

Stability classify2(const std::complex<double>* eig, double scale) {
    const double tol = 1e-10 * (scale + 1.0);
    const double r0 = eig[0].real(), r1 = eig[1].real();
    if (std::abs(r0) < tol || std::abs(r1) < tol) return Stability::marginal;
    if (r0 < 0.0 && r1 < 0.0) return Stability::stable;
    if (r0 > 0.0 && r1 > 0.0) return Stability::unstable;
    return Stability::saddle;
}

void eig2(const Mat2& J, std::complex<double>* out) {
    const double tr = J.trace(), det = J.det();
    const std::complex<double> disc(tr * tr - 4.0 * det, 0.0);
    const std::complex<double> root = std::sqrt(disc);
    out[0] = 0.5 * (tr + root);
    out[1] = 0.5 * (tr - root);
}

Equilibrium make_equilibrium(const AmplitudeModel& m, std::vector<double> values,
                             const Mat2& J, std::string name) {
    Equilibrium eq;
    eq.values = std::move(values);
    eq.name = std::move(name);
    eig2(J, eq.eigenvalues);
    double scale = std::abs(J.a) + std::abs(J.b) + std::abs(J.c) + std::abs(J.d);
    eq.stability = classify2(eq.eigenvalues, scale);
    std::vector<double> dA;
    amplitude_rhs(m, nullptr, eq.values, dA);
    for (double v : dA) eq.residual = std::max(eq.residual, std::abs(v));
    return eq;
}

}  // namespace

Equilibrium sl_equilibrium(const AmplitudeModel& model) {
    if (model.kind != AmplitudeKind::cubic_sl && model.kind != AmplitudeKind::gl)
        throw std::invalid_argument("sl_equilibrium: model is not a cubic Stuart-Landau");
    if (model.L == 0.0) throw std::domain_error("sl_equilibrium: L = 0");
    const double ratio = model.sigma / model.L;
    if (ratio < 0.0)
        throw std::domain_error("sl_equilibrium: sigma/L < 0, no nontrivial equilibrium");
    const double A = std::sqrt(ratio);
    Equilibrium eq;
    eq.values = {A};
    eq.name = "A_inf";
    // dF/dA at A_inf is sigma - 3 L A^2 = -2 sigma
    eq.eigenvalues[0] = -2.0 * model.sigma;
    eq.eigenvalues[1] = 0.0;
    eq.residual = std::abs(model.sigma * A - model.L * A * A * A);
    eq.stability = model.sigma > 0.0
                       ? Stability::stable
                       : (model.sigma < 0.0 ? Stability::unstable : Stability::marginal);
    if (std::abs(model.sigma) < 1e-10) eq.stability = Stability::marginal;
    return eq;
}

// ---- quintic diagram / hysteresis ---------------------------------------------

QuinticAt quintic_at(const AmplitudeModel& m, double b) {
    if (m.kind != AmplitudeKind::quintic_sl)
        throw std::invalid_argument("quintic_at: model is not quintic");
    const double e2ref = m.epsilon * m.epsilon;
    if (e2ref <= 0.0)
        throw std::domain_error("quintic_at: model was built at b <= b^c, no reference eps");
    const double e = (b - m.b_crit) / m.b_crit;
    QuinticAt q;
    q.sigma_bar = (e * m.sigma + e * e * m.sigma4) / e2ref;
    q.L_bar = m.L_bar;
    q.R_bar = m.R_bar;
    return q;
}

namespace {

// positive roots X = A^2 of R X^2 - L X + S = 0
struct QuinticRoots {
    int count = 0;
    double X[2];
};

QuinticRoots quintic_positive_roots(const QuinticAt& q) {
    QuinticRoots r;
    const double disc = q.L_bar * q.L_bar - 4.0 * q.R_bar * q.sigma_bar;
    if (disc < 0.0 || q.R_bar == 0.0) return r;
    const double s = std::sqrt(disc);
    double cand[2] = {(q.L_bar - s) / (2.0 * q.R_bar), (q.L_bar + s) / (2.0 * q.R_bar)};
    for (double X : cand)
        if (X > 0.0) r.X[r.count++] = X;
    std::sort(r.X, r.X + r.count);
    return r;
}

Stability quintic_stability(const QuinticAt& q, double A) {
    // dF/dA = sigma - 3 L A^2 + 5 R A^4
    const double d = q.sigma_bar - 3.0 * q.L_bar * A * A + 5.0 * q.R_bar * A * A * A * A;
    const double scale = std::abs(q.sigma_bar) + std::abs(q.L_bar) * A * A +
                         std::abs(q.R_bar) * A * A * A * A;
    if (std::abs(d) < 1e-10 * (scale + 1.0)) return Stability::marginal;
    return d < 0.0 ? Stability::stable : Stability::unstable;
}

}  // namespace

BifurcationDiagram quintic_diagram(const AmplitudeModel& m, double b_lo, double b_hi,
                                   int n_points) {
    if (n_points < 2) throw std::invalid_argument("quintic_diagram: need at least 2 points");
    BifurcationDiagram d;
    d.b_c = m.b_crit;

    // saddle-node: discriminant L^2 - 4 R sigma_bar(b) crosses zero below b^c
    auto disc = [&](double b) {
        const QuinticAt q = quintic_at(m, b);
        return q.L_bar * q.L_bar - 4.0 * q.R_bar * q.sigma_bar;
    };
    double lo = std::min(b_lo, 0.9 * m.b_crit), hi = m.b_crit;
    if (disc(lo) < 0.0 && disc(hi) > 0.0) {
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            (disc(mid) < 0.0 ? lo : hi) = mid;
        }
        d.has_saddle_node = true;
        d.b_s = 0.5 * (lo + hi);
    }

    for (int i = 0; i < n_points; ++i) {
        const double b = b_lo + (b_hi - b_lo) * i / (n_points - 1);
        const QuinticAt q = quintic_at(m, b);
        BranchPoint origin{b, 0.0,
                           q.sigma_bar < 0.0 ? Stability::stable
                                             : (q.sigma_bar > 0.0 ? Stability::unstable
                                                                  : Stability::marginal),
                           0.0};
        d.origin.push_back(origin);
        const QuinticRoots roots = quintic_positive_roots(q);
        for (int r = 0; r < roots.count; ++r) {
            const double A = std::sqrt(roots.X[r]);
            BranchPoint pt{b, A, quintic_stability(q, A),
                           std::abs(q.sigma_bar * A - q.L_bar * A * A * A +
                                    q.R_bar * A * A * A * A * A)};
            // larger root is the persistent branch; the smaller one (present
            // only between b^s and b^c) is the unstable separatrix
            if (roots.count == 2 && r == 0) d.middle.push_back(pt);
            else d.upper.push_back(pt);
        }
    }
    return d;
}

std::vector<HysteresisLeg> hysteresis_sweep(const AmplitudeModel& m,
                                            const std::vector<double>& b_path, double seed) {
    if (m.kind != AmplitudeKind::quintic_sl)
        throw std::invalid_argument("hysteresis_sweep: model is not quintic");
    std::vector<HysteresisLeg> legs;
    double A = seed;
    for (double b : b_path) {
        const QuinticAt q = quintic_at(m, b);
        AmplitudeModel leg = m;
        leg.sigma_bar = q.sigma_bar;
        leg.L_bar = q.L_bar;
        leg.R_bar = q.R_bar;
        // noise floor: the uniform state is never reached exactly
        A = std::max(std::abs(A), seed);
        std::vector<double> y{A};
        const OdeRhs rhs = [&](double, const std::vector<double>& yy,
                               std::vector<double>& dy) { amplitude_rhs(leg, nullptr, yy, dy); };
        OdeOptions opts;
        opts.rtol = 1e-9;
        opts.divergence_bound = 1e9;
        const double window = 10.0 / std::max(1e-3, std::abs(q.sigma_bar));
        double prev = y[0];
        for (int w = 0; w < 400; ++w) {
            integrate_ode(rhs, y, 0.0, window, opts);
            if (std::abs(y[0] - prev) < 1e-9 * (1.0 + std::abs(y[0]))) break;
            prev = y[0];
        }
        A = y[0];
        legs.push_back({b, std::abs(A)});
    }
    return legs;
}

// ---- coupled equilibria --------------------------------------------------------

std::vector<Equilibrium> coupled_equilibria(const AmplitudeModel& m) {
    if (m.kind != AmplitudeKind::coupled)
        throw std::invalid_argument("coupled_equilibria: model is not the coupled system");
    std::vector<Equilibrium> out;
    auto jac = [&](double a1, double a2) {
        return Mat2{m.sigma - 3.0 * m.L1 * a1 * a1 + m.R1 * a2 * a2, 2.0 * m.R1 * a1 * a2,
                    2.0 * m.R2 * a1 * a2, m.sigma - 3.0 * m.L2 * a2 * a2 + m.R2 * a1 * a1};
    };
    out.push_back(make_equilibrium(m, {0.0, 0.0}, jac(0.0, 0.0), "origin"));
    if (m.L1 != 0.0 && m.sigma / m.L1 >= 0.0) {
        const double a = std::sqrt(m.sigma / m.L1);
        out.push_back(make_equilibrium(m, {a, 0.0}, jac(a, 0.0), "rhombic_1"));
    }
    if (m.L2 != 0.0 && m.sigma / m.L2 >= 0.0) {
        const double a = std::sqrt(m.sigma / m.L2);
        out.push_back(make_equilibrium(m, {0.0, a}, jac(0.0, a), "rhombic_2"));
    }
    // mixed mode: linear system in (X, Y) = (A1^2, A2^2)
    const Mat2 M{-m.L1, m.R1, m.R2, -m.L2};
    const double scale = std::abs(m.L1 * m.L2) + std::abs(m.R1 * m.R2);
    if (std::abs(M.det()) > 1e-12 * (scale + 1e-300)) {
        const Vec2 XY = solve2(M, {-m.sigma, -m.sigma});
        if (XY.x > 0.0 && XY.y > 0.0) {
            const double a1 = std::sqrt(XY.x), a2 = std::sqrt(XY.y);
            out.push_back(make_equilibrium(m, {a1, a2}, jac(a1, a2), "mixed"));
        }
    }
    return out;
}

// ---- hexagon equilibria ---------------------------------------------------------

std::vector<double> real_cubic_roots(double c3, double c2, double c1, double c0) {
    std::vector<double> roots;
    if (c3 == 0.0) {
        if (c2 == 0.0) {
            if (c1 != 0.0) roots.push_back(-c0 / c1);
            return roots;
        }
        const double disc = c1 * c1 - 4.0 * c2 * c0;
        if (disc >= 0.0) {
            roots.push_back((-c1 + std::sqrt(disc)) / (2.0 * c2));
            roots.push_back((-c1 - std::sqrt(disc)) / (2.0 * c2));
        }
        return roots;
    }
    // depressed cubic t^3 + p t + q with x = t - a/3
    const double a = c2 / c3, b = c1 / c3, c = c0 / c3;
    const double p = b - a * a / 3.0;
    const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    const double disc = q * q / 4.0 + p * p * p / 27.0;
    if (disc > 0.0) {
        const double s = std::sqrt(disc);
        const double u = std::cbrt(-q / 2.0 + s);
        const double v = std::cbrt(-q / 2.0 - s);
        roots.push_back(u + v - a / 3.0);
    } else {
        const double r = std::sqrt(std::max(0.0, -p * p * p / 27.0));
        const double phi = std::acos(std::clamp(-q / (2.0 * r + 1e-300), -1.0, 1.0));
        const double mag = 2.0 * std::sqrt(std::max(0.0, -p / 3.0));
        for (int k = 0; k < 3; ++k)
            roots.push_back(mag * std::cos((phi + 2.0 * M_PI * k) / 3.0) - a / 3.0);
    }
    for (double& x : roots) {
        for (int it = 0; it < 5; ++it) {
            const double f = ((c3 * x + c2) * x + c1) * x + c0;
            const double fp = (3.0 * c3 * x + 2.0 * c2) * x + c1;
            if (fp == 0.0) break;
            x -= f / fp;
        }
    }
    return roots;
}

std::vector<Equilibrium> hexagon_equilibria(const AmplitudeModel& m) {
    if (m.kind != AmplitudeKind::resonant)
        throw std::invalid_argument("hexagon_equilibria: model is not the resonant system");
    if (m.S1 == 0.0 || m.S2 == 0.0)
        throw std::domain_error("hexagon_equilibria: degenerate coefficients S1 or S2 = 0");
    std::vector<Equilibrium> out;
    auto jac = [&](double a1, double a2) {
        return Mat2{m.sigma1 - m.L1 * a2 + m.R1 * a2 * a2 + 3.0 * m.S1 * a1 * a1,
                    -m.L1 * a1 + 2.0 * m.R1 * a1 * a2,
                    -2.0 * m.L2 * a1 + 2.0 * m.R2 * a1 * a2,
                    m.sigma2 + m.R2 * a1 * a1 + 3.0 * m.S2 * a2 * a2};
    };
    out.push_back(make_equilibrium(m, {0.0, 0.0}, jac(0.0, 0.0), "origin"));
    if (-m.sigma2 / m.S2 >= 0.0) {
        const double a2 = std::sqrt(-m.sigma2 / m.S2);
        out.push_back(make_equilibrium(m, {0.0, a2}, jac(0.0, a2), "R+"));
        out.push_back(make_equilibrium(m, {0.0, -a2}, jac(0.0, -a2), "R-"));
    }
    // cubic in A2 from eliminating A1^2
    const double c3 = m.S1 * m.S2 - m.R1 * m.R2;
    const double c2 = m.L1 * m.R2 + m.L2 * m.R1;
    const double c1 = m.S1 * m.sigma2 - m.L1 * m.L2 - m.R2 * m.sigma1;
    const double c0 = m.L2 * m.sigma1;
    int idx = 0;
    for (double a2 : real_cubic_roots(c3, c2, c1, c0)) {
        const double A1sq = (-m.R1 * a2 * a2 + m.L1 * a2 - m.sigma1) / m.S1;
        ++idx;
        if (A1sq < 0.0) continue;
        const double a1 = std::sqrt(A1sq);
        out.push_back(
            make_equilibrium(m, {a1, a2}, jac(a1, a2), "H+" + std::to_string(idx)));
        out.push_back(
            make_equilibrium(m, {-a1, a2}, jac(-a1, a2), "H-" + std::to_string(idx)));
    }
    return out;
}

}  // namespace bruss
