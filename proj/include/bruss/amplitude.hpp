// Amplitude-equation dynamics: trajectories, equilibria with stability,
// bifurcation diagrams and hysteresis traces for the systems produced by
// the weakly nonlinear analysis.
#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "bruss/ode.hpp"
#include "bruss/wnl.hpp"

namespace bruss {

enum class Stability { stable, unstable, saddle, marginal };

std::string stability_label(Stability s);

struct Equilibrium {
    std::vector<double> values;
    Stability stability = Stability::stable;
    std::complex<double> eigenvalues[2];
    double residual = 0.0;
    std::string name;
};

struct AmplitudeState {
    double T = 0.0;
    std::vector<double> values;  // 1 or 2 amplitudes, or the GL grid values
};

struct Trajectory {
    std::vector<AmplitudeState> states;
    bool diverged = false;
};

// spatial grid for the Ginzburg-Landau equation (slow variable X)
struct GlGrid {
    double X_max = 1.0;
    int N = 128;
    double h() const { return X_max / N; }
    // cell centers (i + 1/2) h, matching the PDE module's grids
    double x(int i) const { return (i + 0.5) * h(); }
};

// Right-hand side of the amplitude system for the model's kind (the GL
// kind uses the method-of-lines grid with no-flux ends).
void amplitude_rhs(const AmplitudeModel& model, const GlGrid* grid,
                   const std::vector<double>& A, std::vector<double>& dA);

// Integrates the amplitude system from `init` to T_end, storing states
// every `store_every` time units (0 = every accepted step). Divergence
// (expected for the cubic equation with L < 0) is reported, not thrown.
Trajectory integrate_amplitude(const AmplitudeModel& model, std::vector<double> init,
                               double T_end, double store_every = 0.0,
                               const GlGrid* grid = nullptr, const OdeOptions& opts = {});

// Stable equilibrium A_inf = sqrt(sigma/L) of the cubic Stuart-Landau
// equation. Throws std::domain_error when sigma/L < 0.
Equilibrium sl_equilibrium(const AmplitudeModel& model);

// --- quintic bifurcation diagram / hysteresis --------------------------------

struct BranchPoint {
    double b = 0.0;
    double amplitude = 0.0;
    Stability stability = Stability::stable;
    double residual = 0.0;
};

struct BifurcationDiagram {
    std::vector<BranchPoint> origin;
    std::vector<BranchPoint> upper;   // large-amplitude branch
    std::vector<BranchPoint> middle;  // unstable branch between b^s and b^c
    bool has_saddle_node = false;
    double b_s = 0.0;
    double b_c = 0.0;
};

// Effective quintic coefficients at parameter b: L_bar and R_bar frozen at
// the model's reference eps, sigma_bar(b) = (e sigma + e^2 sigma4)/eps^2
// with e = (b - b^c)/b^c, so the T = eps^2 t equation
//   dA/dT = sigma_bar(b) A - L_bar A^3 + R_bar A^5
// carries the b-sweep entirely in its linear coefficient.
struct QuinticAt {
    double sigma_bar = 0.0, L_bar = 0.0, R_bar = 0.0;
};
QuinticAt quintic_at(const AmplitudeModel& model, double b);

BifurcationDiagram quintic_diagram(const AmplitudeModel& model, double b_lo, double b_hi,
                                   int n_points);

struct HysteresisLeg {
    double b = 0.0;
    double amplitude = 0.0;  // settled |A| at the end of the leg
};

// Quasi-static sweep along the given b path: at each leg the quintic is
// integrated from the previous amplitude (with a small seed floor standing
// in for noise) until the amplitude settles.
std::vector<HysteresisLeg> hysteresis_sweep(const AmplitudeModel& model,
                                            const std::vector<double>& b_path,
                                            double seed = 1e-3);

// --- 2D systems ---------------------------------------------------------------

// All equilibria of the coupled Landau system (origin, the two rhombic
// axes, the mixed mode) with stability from the 2x2 Jacobian.
std::vector<Equilibrium> coupled_equilibria(const AmplitudeModel& model);

// Stationary states of the resonant system: R+- = (0, +-sqrt(-sigma2/S2))
// plus the roots H_i^{+-} of the cubic in A2. Throws on S1 = 0 or S2 = 0.
std::vector<Equilibrium> hexagon_equilibria(const AmplitudeModel& model);

// real roots of c3 x^3 + c2 x^2 + c1 x + c0
std::vector<double> real_cubic_roots(double c3, double c2, double c1, double c0);

}  // namespace bruss
