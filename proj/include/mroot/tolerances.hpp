#ifndef MROOT_TOLERANCES_HPP
#define MROOT_TOLERANCES_HPP

#include <array>
#include <cmath>
#include <limits>
#include <string_view>

namespace mroot {

/// Every threshold and finite-difference step used by the verification
/// surface. Relative tolerances compare a max componentwise difference
/// against the largest reference magnitude; "scale" tolerances multiply a
/// per-check magnitude documented at the check site.
struct Tolerances {
  // metric
  double homogeneity = 1e-12;
  double quadratic_form = 1e-11;
  double annihilation = 1e-10;
  double aidx_dot = 1e-12;
  double hessian_fd = 1e-6;
  double gradient_fd = 1e-7;
  double inverse_closed = 1e-9;
  double inverse_identity = 1e-10;
  double lowering = 1e-11;
  // v-geometry
  double symmetry = 1e-13;
  double torsion_fd = 1e-6;
  double torsion_lowering = 1e-10;
  double torsion_trace = 1e-11;
  double partial_fd = 1e-6;
  double lemma = 1e-9;
  // curvature
  double curvature_routes = 1e-10;
  double curvature_symmetry = 1e-12;
  double s3 = 1e-8;
  double lambda_homogeneity = 1e-9;
  // T-tensor
  double t_rtol = 1e-6;
  double t_atol = 1e-9;
  double t_symmetry = 1e-11;
  double t_definition = 1e-6;
  // Berwald-Moor theorem
  double bm_torsion = 1e-11;
  double bm_S = 1e-9;
  double bm_lambda = 1e-10;
  double bm_T = 1e-10;
  double bm_closed_forms = 1e-11;
  double bm_trace = 1e-12;
  // finite-difference step factors, see oracle::fd_steps and fd_hessian_steps
  double fd_step_first = std::cbrt(std::numeric_limits<double>::epsilon());
  double fd_step_second = std::pow(std::numeric_limits<double>::epsilon(), 1.0 / 6.0);

  struct Field {
    std::string_view name;
    double Tolerances::*member;
  };

  static constexpr auto fields() {
    return std::array{
        Field{"homogeneity", &Tolerances::homogeneity},
        Field{"quadratic_form", &Tolerances::quadratic_form},
        Field{"annihilation", &Tolerances::annihilation},
        Field{"aidx_dot", &Tolerances::aidx_dot},
        Field{"hessian_fd", &Tolerances::hessian_fd},
        Field{"gradient_fd", &Tolerances::gradient_fd},
        Field{"inverse_closed", &Tolerances::inverse_closed},
        Field{"inverse_identity", &Tolerances::inverse_identity},
        Field{"lowering", &Tolerances::lowering},
        Field{"symmetry", &Tolerances::symmetry},
        Field{"torsion_fd", &Tolerances::torsion_fd},
        Field{"torsion_lowering", &Tolerances::torsion_lowering},
        Field{"torsion_trace", &Tolerances::torsion_trace},
        Field{"partial_fd", &Tolerances::partial_fd},
        Field{"lemma", &Tolerances::lemma},
        Field{"curvature_routes", &Tolerances::curvature_routes},
        Field{"curvature_symmetry", &Tolerances::curvature_symmetry},
        Field{"s3", &Tolerances::s3},
        Field{"lambda_homogeneity", &Tolerances::lambda_homogeneity},
        Field{"t_rtol", &Tolerances::t_rtol},
        Field{"t_atol", &Tolerances::t_atol},
        Field{"t_symmetry", &Tolerances::t_symmetry},
        Field{"t_definition", &Tolerances::t_definition},
        Field{"bm_torsion", &Tolerances::bm_torsion},
        Field{"bm_S", &Tolerances::bm_S},
        Field{"bm_lambda", &Tolerances::bm_lambda},
        Field{"bm_T", &Tolerances::bm_T},
        Field{"bm_closed_forms", &Tolerances::bm_closed_forms},
        Field{"bm_trace", &Tolerances::bm_trace},
        Field{"fd_step_first", &Tolerances::fd_step_first},
        Field{"fd_step_second", &Tolerances::fd_step_second},
    };
  }

  /// Returns false for an unknown name.
  bool set(std::string_view name, double value) {
    for (const auto& f : fields()) {
      if (f.name == name) {
        this->*f.member = value;
        return true;
      }
    }
    return false;
  }
};

}  // namespace mroot

#endif  // MROOT_TOLERANCES_HPP
