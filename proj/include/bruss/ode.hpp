// Adaptive embedded Runge-Kutta (Dormand-Prince 5(4)) on plain vectors.
// Used for the low-dimensional amplitude systems and the Ginzburg-Landau
// method-of-lines grid; the PDE module has its own stabilized stepper.
#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace bruss {

struct OdeOptions {
    double rtol = 1e-9;
    double atol = 1e-12;
    double dt_init = 1e-4;
    double dt_max = 1e300;
    double divergence_bound = 1e12;  // abort when the sup norm exceeds this
    std::size_t max_steps = 50'000'000;
};

struct OdeStatus {
    bool diverged = false;
    std::size_t steps = 0;
    std::size_t rejected = 0;
};

using OdeRhs = std::function<void(double t, const std::vector<double>& y,
                                  std::vector<double>& dydt)>;

// Integrates y' = f(t, y) from t0 to t1, calling `observer(t, y)` after
// every accepted step (and once at t0). Returns the status; on divergence
// the state holds the last accepted step.
OdeStatus integrate_ode(const OdeRhs& f, std::vector<double>& y, double t0, double t1,
                        const OdeOptions& opts,
                        const std::function<void(double, const std::vector<double>&)>& observer =
                            nullptr);

}  // namespace bruss
