#ifndef ELX_ZPDE_HPP
#define ELX_ZPDE_HPP

#include <string>
#include <vector>

#include "elx/grid_function.hpp"
#include "elx/stefan.hpp"

namespace elx {

// diffusivity and its antiderivative for the fixed-domain equation
//   dz/dt = d/dy ( K(z) dz/dy ),  K(z) = 1/(1-z)^2,  G(z) = z/(1-z)
inline double diffusivity_K(double z) { return 1.0 / ((1.0 - z) * (1.0 - z)); }
inline double kirchhoff_G(double z) { return z / (1.0 - z); }

struct ZParams {
  double a = 0.0;      // prescribed boundary influx at y = 0
  double t_max = 0.25;
  int grid_m = 400;    // finite-volume cells on [0,1]
  double dt = 1e-5;
  double eps_clip = 1e-9;   // keeps iterates away from the K singularity
  int max_newton = 50;
  double newton_tol = 1e-12;
  int max_stored_slices = 2001;
};

// cell-average solution; z(1,t) = 0 is held through a ghost value and the
// influx enters as an exact boundary flux, so cell masses telescope
struct ZSolution {
  double a = 0;
  int m = 0;
  std::vector<double> times;
  std::vector<std::vector<double>> z;  // cell averages, size m per slice

  std::size_t slice_index(double t) const;
  double mass(std::size_t slice_idx) const;
  GridFunction slice_function(std::size_t slice_idx) const;  // piecewise linear
  // flux residual |G(z)_y(0) + a| of a stored slice (one-sided difference)
  double left_flux_residual(std::size_t slice_idx) const;
  // the other literal reading of the endpoint condition, |z(0,t)|
  double left_dirichlet_residual(std::size_t slice_idx) const;
};

ZSolution solve_z(const GridFunction& z0, const ZParams& params,
                  const std::vector<double>& required_times = {});

// upsilon(x) = x + int_0^x v and its inverse tau, built to fourth order so
// the transform round trips survive the 1e-6 gate at m = 400
struct TransformPair {
  CubicHermite upsilon;  // [0, s] -> [0, 1]
  CubicHermite tau;      // [0, 1] -> [0, s]
  double s = 1;
};

TransformPair build_upsilon(const std::vector<double>& v_nodes, double s);
TransformPair build_tau(const std::vector<double>& z_nodes);

// z(y) = v(tau(y)) tau'(y), evaluated as v/(1+v) at tau(y)
std::vector<double> v_to_z(const std::vector<double>& v_nodes, double s,
                           const std::vector<double>& y_eval);
std::vector<double> v_to_z(const StefanSolution& sol, double t,
                           const std::vector<double>& y_eval);

// inverse transform: s = 1 - int z, v = z/(1-z) at upsilon(x)
struct VProfile {
  std::vector<double> v;  // on the uniform grid over [0, s]
  double s = 1;
};
VProfile z_to_v(const std::vector<double>& z_nodes, int out_cells);

// exact transform of a continuum moving-boundary profile into fixed-domain
// initial data; indicator profiles map to their exact image (no pinned-node
// artifact), so both solvers of the equivalence experiment start matched
GridFunction psi_of_profile(const GridFunction& v0, double s0, int cells);

// solves the moving-boundary problem and the fixed-domain problem from the
// matched initial data and reports how far apart the two routes stay
struct EquivalenceReport {
  double sup_linf = 0;
  double sup_l1 = 0;
  double robin_residual_v = 0;      // |v_x + a (v+1)| at x = 0, worst slice
  double flux_residual_z = 0;       // |G(z)_y(0) + a|, worst slice
  double dirichlet_left_z = 0;      // |z(0,t)|, worst slice (literal reading)
  double dirichlet_right_z = 0;     // |z(1,t)|, worst slice (imposed side)
  std::vector<double> times;
  std::vector<double> linf;
  std::vector<double> l1;
  std::string to_json() const;
};

EquivalenceReport equivalence_check(const StefanInitial& initial, double a, double t_max,
                                    int grid_m, double dt,
                                    const std::vector<double>& obs_times);

}  // namespace elx

#endif
