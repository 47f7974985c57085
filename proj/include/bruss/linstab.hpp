// Linear stability analysis of the homogeneous steady state (Q, b/Q):
// dispersion relation, Hopf and Turing thresholds, instability-boundary
// sweeps, and enumeration of admissible Neumann modes on finite domains
// with degeneracy/resonance classification.
//
// Linearization about the steady state gives growth rates sigma(k^2) as
// roots of
//   sigma^2 + g(k^2) sigma + h(k^2) = 0,
//   g = k^2 tr(D) - Gamma tr(K),
//   h = det(D) k^4 + Gamma q k^2 + Gamma^2 det(K),
//   q = -K11 D22 - K22 D11,
// with
//   K = [[b-1, Q^2], [-b/eta^2, -(Q/eta)^2]],
//   D = diag((m+1) Q^m, (n+1)/eta^2 (b/Q)^n).
#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "bruss/model.hpp"
#include "bruss/rational.hpp"
#include "bruss/types.hpp"

namespace bruss {

struct Linearization {
    Mat2 K;    // kinetics Jacobian (without the Gamma factor)
    Mat2 D;    // diagonal diffusion matrix at the steady state
    double q;  // -K11 D22 - K22 D11
};

struct DispersionSample {
    double k2 = 0.0;
    std::complex<double> roots[2];  // roots[0] has the larger real part
    double g_val = 0.0;
    double h_val = 0.0;

    double max_growth() const { return roots[0].real(); }
};

struct Thresholds {
    double b_hopf = 0.0;    // 1 + Q^2/eta^2, attained at k = 0
    double b_turing = 0.0;  // smallest b > 1 on the Turing neutral curve
    double kc2 = 0.0;       // critical squared wavenumber at b_turing
};

// A consistent (b, k^2) pair on the neutral curve h(k^2; b) = 0, i.e. the
// matrix Gamma K - k^2 D is singular there. Produced either at the
// continuum minimum (turing_critical_point) or for a prescribed discrete
// mode (mode_critical_point).
struct CriticalPoint {
    NondimParams np;  // parameters with b set to b_crit
    double b_crit = 0.0;
    double k2 = 0.0;
};

Linearization linearize(const NondimParams& np);

// The operator matrix Gamma K - k^2 D acting on a cos(k x) mode.
Mat2 mode_matrix(const NondimParams& np, double k2);

DispersionSample growth_rates(const NondimParams& np, double k2);

double hopf_threshold(const NondimParams& np);

// Solves q^2 - 4 det(D) det(K) = 0 under q < 0 for the smallest b > 1,
// then kc^2 = -Gamma q / (2 det D). b_turing does not depend on eta or
// Gamma; kc^2 is proportional to Gamma. Throws std::domain_error with
// message "no Turing branch" if no such b exists.
Thresholds turing_threshold(const NondimParams& np);

// Continuum critical point (b^c, k_c^2), Newton-polished so that the mode
// matrix is singular to machine precision.
CriticalPoint turing_critical_point(const NondimParams& np);

// Threshold for a prescribed squared wavenumber: the smallest b > 1 with
// h(k2; b) = 0. Throws if the mode never becomes neutral.
CriticalPoint mode_critical_point(const NondimParams& np, double k2);

// Edges [k1^2, k2^2] of the unstable band (h < 0) at the given b, empty if
// the steady state is Turing-stable at b.
std::optional<std::pair<double, double>> unstable_band(const NondimParams& np);

// --- Neumann mode enumeration on rectangles --------------------------------

// Rectangle [0, Lx] x [0, Ly] (or a line [0, L]) with edges given as exact
// rational-times-optional-sqrt(3) multiples of pi.
struct Domain {
    int dims = 1;
    Surd Lx_over_pi{Rational(2), 0};
    Surd Ly_over_pi{Rational(2), 0};

    static Domain line(const Surd& L_over_pi) { return {1, L_over_pi, L_over_pi}; }
    static Domain rectangle(const Surd& Lx, const Surd& Ly) { return {2, Lx, Ly}; }

    double Lx() const;
    double Ly() const;
    // frequency p pi / Lx as an exact surd
    Surd freq_x(int p) const;
    Surd freq_y(int q) const;
    // (p pi/Lx)^2 + (q pi/Ly)^2 as an exact rational
    Rational mode_k2(int p, int q) const;
};

struct ModePair {
    int p = 0;
    int q = 0;
    Surd phi_x;  // p pi / Lx
    Surd phi_y;  // q pi / Ly
    Rational k2; // phi_x^2 + phi_y^2, exact
};

enum class Resonance { none, resonant };

struct ModeSet {
    std::vector<ModePair> modes;  // all pairs sharing the same exact k^2
    Rational k2;
    int multiplicity = 0;
    Resonance resonance = Resonance::none;
    double growth = 0.0;  // max real growth rate at this k^2
};

// All (p, q) with h(k^2) < 0 grouped by exact k^2; returns the group at
// the most unstable admissible k^2. Throws std::domain_error
// ("no admissible unstable mode") when the band contains no lattice point.
ModeSet admissible_modes(const NondimParams& np, const Domain& dom);

// --- Stability-region sweeps ------------------------------------------------

enum class Region { stable, hopf, turing, turing_hopf };

std::string region_label(Region r);

struct SweepPoint {
    double x1 = 0.0;        // first sweep coordinate
    double x2 = 0.0;        // second sweep coordinate
    double b_hopf = 0.0;
    double b_turing = 0.0;  // NaN if no Turing branch
    double kc2 = 0.0;       // NaN if no Turing branch
    Region region = Region::stable;
};

struct BoundaryCurve {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

struct SweepResult {
    std::string axis1, axis2;
    std::vector<SweepPoint> points;
    std::vector<BoundaryCurve> boundaries;
};

// Sweep the (eta^2, Q^2) plane at fixed b. Emits per-point region labels
// plus the Hopf and Turing boundary polylines.
SweepResult sweep_eta2_q2(const NondimParams& base, const std::vector<double>& eta2_grid,
                          const std::vector<double>& q2_grid);

// Sweep the (Q^2, b) plane at fixed eta^2.
SweepResult sweep_q2_b(const NondimParams& base, const std::vector<double>& q2_grid,
                       const std::vector<double>& b_grid);

}  // namespace bruss
