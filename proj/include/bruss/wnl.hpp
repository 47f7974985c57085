// Weakly nonlinear analysis near the Turing threshold.
//
// With eps^2 = (b - b^c)/b^c and the multiple-scales expansion
//   w = eps w1 + eps^2 w2 + ...,  b = b^c (1 + eps^2),
// the solvability (Fredholm) conditions at successive orders produce the
// amplitude equations: cubic Stuart-Landau at O(eps^3), quintic at
// O(eps^5), the Ginzburg-Landau equation for slowly modulated patterns,
// and the coupled / resonant systems when the critical eigenvalue is
// double. The paper's closed-form coefficient expressions are unpublished,
// so every coefficient here is assembled by a numerical Galerkin
// projection: kinetics expanded exactly (they are cubic polynomials),
// nonlinear diffusion expanded via the Taylor matrices D1, D2, ... and all
// cos*cos products reduced with an exact product-to-sum table on the
// Neumann mode lattice.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "bruss/linstab.hpp"
#include "bruss/model.hpp"
#include "bruss/types.hpp"

namespace bruss {

struct KernelPair {
    Vec2 rho;      // Ker(Gamma K - k2 D), normalized rho = (1, rho2)
    Vec2 psi_adj;  // kernel of the transpose, scaled so dot(rho, psi_adj) = 1
};

// Taylor data of the expansion about the critical steady state.
struct ExpansionTables {
    Mat2 D1;          // quadratic diffusion matrix D^(1)
    Mat2 D2;          // cubic diffusion matrix D^(2)
    double quad_uv;   // kinetics quadratic weight of u1 v1: 2Q
    double quad_uu;   // kinetics quadratic weight of u1^2: b^c/Q
    double b1 = 0.0;  // first-order b correction (always 0 by solvability)
    double b2 = 0.0;  // second-order b correction (= b^c)
};

enum class AmplitudeKind { cubic_sl, gl, quintic_sl, coupled, resonant };

std::string amplitude_kind_name(AmplitudeKind k);

// One cosine planform cos(phi_x x) cos(phi_y y) of the second-order field,
// with its amplitude-polynomial coefficients.
struct W2Term {
    int p = 0, q = 0;          // harmonic / lattice indices
    double phi_x = 0.0, phi_y = 0.0;
    struct Mono {
        int i = 0, j = 0;      // powers of A1, A2
        double u = 0.0, v = 0.0;
    };
    std::vector<Mono> monos;
};

// Data needed to evaluate the weakly nonlinear approximation in space.
struct WnlReconstruction {
    int n_modes = 1;
    std::vector<double> phi_x, phi_y;  // critical planform frequencies
    Vec2 rho;
    std::vector<W2Term> w2;            // second-order harmonics
};

struct AmplitudeModel {
    AmplitudeKind kind = AmplitudeKind::cubic_sl;

    // cubic Stuart-Landau dA/dT = sigma A - L A^3 (also the GL reaction part)
    double sigma = 0.0;
    double L = 0.0;
    double nu = 0.0;  // GL: dA/dT = nu A_XX + sigma A - L A^3

    // quintic: O(eps^4)-level solvability pieces and the composite
    // sigma_bar = sigma + eps^2 sigma4 etc., R_bar = eps^2 R4, so that
    // dA/dT = sigma_bar A - L_bar A^3 + R_bar A^5 with T = eps^2 t.
    double sigma4 = 0.0, L4 = 0.0, R4 = 0.0;
    double sigma_bar = 0.0, L_bar = 0.0, R_bar = 0.0;

    // coupled (multiplicity 2, non-resonant):
    //   dA1/dT = sigma A1 - L1 A1^3 + R1 A1 A2^2
    //   dA2/dT = sigma A2 - L2 A2^3 + R2 A1^2 A2
    double L1 = 0.0, L2 = 0.0, R1 = 0.0, R2 = 0.0;

    // resonant (multiplicity 2, resonance condition):
    //   dA1/dT = sigma1 A1 - L1 A1 A2 + R1 A1 A2^2 + S1 A1^3
    //   dA2/dT = sigma2 A2 - L2 A1^2 + R2 A1^2 A2 + S2 A2^3
    // (L1, L2 reuse the fields above; amplitudes carry the eps-rescaled
    // gauge recorded in amp_scale)
    double sigma1 = 0.0, sigma2 = 0.0, S1 = 0.0, S2 = 0.0;

    // critical-point context
    double b_crit = 0.0;
    double k2c = 0.0;
    double epsilon = 0.0;    // reference eps (from the run b), >= 0
    double amp_scale = 0.0;  // field ~ amp_scale * A_i * rho * planform_i
    KernelPair kernels;
    Vec2 w21;                // GL auxiliary vector (zero otherwise)
    NondimParams np_run;     // parameters at the run b
    double solvability_residual = 0.0;

    WnlReconstruction recon;
};

// Kernel and adjoint-kernel pair of Gamma K - k2 D. Throws
// std::domain_error("thresholds inconsistent...") when the matrix is not
// rank-deficient at (b, k2).
KernelPair critical_kernels(const NondimParams& np_at_bc, double k2);

// Solves (Gamma K - harmonic_k2 D) x = rhs. Away from the critical
// wavenumber this is a plain 2x2 solve; at the critical wavenumber the
// system is singular and the least-squares solution orthogonal to rho is
// returned, provided rhs is orthogonal to the adjoint kernel (throws a
// solvability-violation error otherwise).
Vec2 solve_harmonic(const NondimParams& np_at_bc, double harmonic_k2, const Vec2& rhs);

ExpansionTables expansion_tables(const NondimParams& np_at_bc);

// --- amplitude-equation coefficient builders --------------------------------
//
// Each builder takes parameters at the *run* b (typically b = b^c(1+eps^2))
// plus the domain; the critical mode and its exact threshold are selected
// internally, and eps is recovered from the run b.

AmplitudeModel stuart_landau_coeffs(const NondimParams& np_run, const Domain& dom);

// Ginzburg-Landau coefficients at the continuum critical point (the
// envelope description does not quantize the carrier); 1D.
AmplitudeModel ginzburg_landau_coeffs(const NondimParams& np_run);

AmplitudeModel quintic_coeffs(const NondimParams& np_run, const Domain& dom);

AmplitudeModel coupled_landau_coeffs(const NondimParams& np_run, const Domain& dom);

AmplitudeModel resonant_coeffs(const NondimParams& np_run, const Domain& dom);

// Dispatch on the multiplicity/resonance of the selected critical modes.
AmplitudeModel wnl_coeffs(const NondimParams& np_run, const Domain& dom, AmplitudeKind kind);

// The critical modes used by the builders: the lattice group with the
// lowest mode-exact threshold (equals the most unstable admissible group
// near onset).
ModeSet select_critical_modes(const NondimParams& np, const Domain& dom);

// Evaluate the weakly nonlinear approximation at a point, for given
// amplitudes. order = 1 keeps the critical planforms; order = 2 adds the
// second-order harmonics (zero mode, second harmonics, resonant
// combinations). Returns the deviation from the steady state scaled into
// the physical field, i.e. (u, v) themselves.
Vec2 wnl_evaluate(const AmplitudeModel& model, const std::vector<double>& amplitudes, int order,
                  double x, double y);

// JSON serialization for the coeffs CLI output / amplitude CLI input.
nlohmann::json amplitude_model_to_json(const AmplitudeModel& m);
AmplitudeModel amplitude_model_from_json(const nlohmann::json& j);

}  // namespace bruss
