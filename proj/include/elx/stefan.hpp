#ifndef ELX_STEFAN_HPP
#define ELX_STEFAN_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "elx/grid_function.hpp"
#include "elx/lattice.hpp"

namespace elx {

class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

struct StefanParams {
  double a = 0.0;
  double t_max = 0.25;
  int grid_m = 400;        // cells on the immobilized domain [0,1]
  double dt = 1e-5;
  double s_min = 1e-3;     // collapse guard for the moving boundary
  int max_picard = 50;     // per-step fixed-point iterations on s'
  double picard_tol = 1e-10;
  int max_stored_slices = 2001;
};

// moving-boundary solution in the immobilized coordinate xi = x / s(t);
// v slices are stored on the (grid_m + 1)-node xi grid at the slice times
struct StefanSolution {
  double a = 0;
  int m = 0;
  std::vector<double> times;            // stored slice times (incl. 0 and t_max)
  std::vector<double> s;                // boundary at slice times
  std::vector<std::vector<double>> v;   // one slice per stored time
  bool collapsed = false;               // boundary hit s_min; output is partial
  double halt_time = 0;

  double s_at(double t) const;                  // linear in t between slices
  const std::vector<double>& slice(double t) const;  // nearest stored slice
  std::size_t slice_index(double t) const;

  // integral of v over [0, s] at a stored slice
  double v_mass(std::size_t slice_idx) const;
};

// initial data carried as a profile on [0, s0]; the solver samples it on the
// immobilized grid and pins v(s0) = 0 at the Dirichlet node
struct StefanInitial {
  GridFunction v0;  // domain [0, s0]
  double s0 = 1.0;
};

// named profiles used across the experiments: "zero" (v0 = 0, s0 = 1),
// "indicator-half" (v0 = 1 on [0,1/2], s0 = 1/2), "stationary" for given a
StefanInitial stefan_profile(const std::string& name, double a);

// advance (2)-(6) by boundary immobilization: implicit Euler, central
// differences, per-step fixed point on s'. The first step ramps up through
// halved substeps to damp the layer left by non-smooth data.
StefanSolution solve_stefan(const StefanInitial& initial, const StefanParams& params,
                            const std::vector<double>& required_times = {});

// flat-domain density u = 1_{x < s} (v + 1), carrying the unit jump at s
GridFunction flatten_u(const StefanSolution& sol, double t);

// residual of the integral identity
//   <f,u(t)> - <f,u(0)> = int_0^t <f'', rho(u)> - a int_0^t <f', u>
// by trapezoid quadrature in space and time over the stored slices
double weak_residual(const StefanSolution& sol, const TestFunction& f, double t);

// true when min v >= -1e-10 over all stored slices
bool positivity_check(const StefanSolution& sol);

}  // namespace elx

#endif
