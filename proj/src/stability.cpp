#include "flockwave/stability.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <vector>

#include <Eigen/Dense>

#include "flockwave/error.hpp"

extern "C" void dgeev_(const char* jobvl, const char* jobvr, const int* n, double* a,
                       const int* lda, double* wr, double* wi, double* vl, const int* ldvl,
                       double* vr, const int* ldvr, double* work, const int* lwork, int* info);

namespace flockwave {

CriteriaReport necessary_criteria(const ReducedParams& p, const CouplingConfig& rho) {
  const double gx = p.g_x;
  const double gv = p.g_v;
  const double ax1 = p.alpha_x[1];
  const double bx1 = p.beta_x[1];
  const double av1 = p.alpha_v[1];
  const double b = p.velocity_skew();
  const double a_x = 4.0 + 3.0 * ax1;
  const double a_v = 4.0 + 3.0 * av1;

  CriteriaReport r;
  auto set = [&](std::size_t i, const char* id, const char* formula, double value, double margin) {
    r.conditions[i] = {id, formula, margin >= 0.0, value, margin};
  };

  const double skew_x = p.beta_x[1] + 2.0 * p.beta_x[2];
  set(0, "i", "beta_x1 + 2 beta_x2 = 0", skew_x, kConditionOneTolerance - std::abs(skew_x));
  set(1, "ii", "g_v <= 0", gv, -gv);
  set(2, "iii", "alpha_v1 in [-4/3, 0]", av1, std::min(av1 + 4.0 / 3.0, -av1));
  set(3, "iv", "g_x alpha_x1 >= 0", gx * ax1, gx * ax1);
  const double disc = velocity_discriminant(p);
  set(4, "v", "g_v^2 (beta_v1 + 2 beta_v2)^2 - 2 g_x (4 + 3 alpha_x1) >= 0", disc, disc);
  const double cubic = gv * gv * gx * a_v * a_v * a_x + 2.0 * gv * gv * gx * b * a_v * bx1 +
                       2.0 * gx * gx * bx1 * bx1;
  set(5, "vi", "g_v^2 g_x a_v^2 a_x + 2 g_v^2 g_x b a_v beta_x1 + 2 g_x^2 beta_x1^2 <= 0", cubic,
      -cubic);
  const double lc = gx - gv * gv * rho.rho_v().sum_of_squares();
  set(6, "vii", "g_x - g_v^2 sum rho_v^2 <= 0", lc, -lc);

  r.overall = std::all_of(r.conditions.begin(), r.conditions.end(),
                          [](const Condition& c) { return c.satisfied; });
  return r;
}

double circle_spectral_margin(const ReducedParams& p, int samples) {
  return eigencurves(p, samples).spectral_margin;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Stable:
      return "stable";
    case Verdict::Unstable:
      return "unstable";
    case Verdict::Marginal:
      return "marginal";
  }
  return "unknown";
}

EigenReport line_eigen_stability(const SystemMatrices& m, std::optional<double> zero_tol) {
  const int n = m.N();
  if (n > kDenseEigenCeiling) {
    throw Error("stability", "dense eigensolve refused for N = " + std::to_string(n) + " > " +
                                 std::to_string(kDenseEigenCeiling) +
                                 "; use circle_spectral_margin as a proxy");
  }
  Eigen::MatrixXd M = m.first_order();
  const double norm = M.norm();
  // Hessenberg reduction + shifted QR (LAPACK dgeev, no eigenvectors).
  int size = static_cast<int>(M.rows());
  int lda = size;
  int ldv = 1;
  int info = 0;
  char no = 'N';
  std::vector<double> wr(static_cast<std::size_t>(size));
  std::vector<double> wi(static_cast<std::size_t>(size));
  double query = 0.0;
  int lwork = -1;
  dgeev_(&no, &no, &size, M.data(), &lda, wr.data(), wi.data(), nullptr, &ldv, nullptr, &ldv,
         &query, &lwork, &info);
  lwork = static_cast<int>(query);
  std::vector<double> work(static_cast<std::size_t>(std::max(1, lwork)));
  dgeev_(&no, &no, &size, M.data(), &lda, wr.data(), wi.data(), nullptr, &ldv, nullptr, &ldv,
         work.data(), &lwork, &info);
  if (info != 0) {
    std::ostringstream msg;
    msg << "eigensolver did not converge (2N = " << size << ", ||M||_F = " << norm
        << ", boundary " << to_string(m.boundary) << ", info " << info << ")";
    throw Error("stability", msg.str());
  }

  EigenReport report;
  report.N = n;
  report.boundary = m.boundary;
  report.zero_tolerance = zero_tol.value_or(1e-8 * norm);
  report.eigenvalues.reserve(wr.size());
  for (std::size_t i = 0; i < wr.size(); ++i) report.eigenvalues.emplace_back(wr[i], wi[i]);
  report.max_real = -std::numeric_limits<double>::infinity();
  bool non_kernel_stable = true;
  for (const auto& ev : report.eigenvalues) {
    report.max_real = std::max(report.max_real, ev.real());
    if (std::abs(ev.real()) <= report.zero_tolerance) {
      ++report.kernel_count;
    } else if (ev.real() > 0.0) {
      non_kernel_stable = false;
    }
  }
  if (report.max_real > report.zero_tolerance) {
    report.verdict = Verdict::Unstable;
  } else if (non_kernel_stable && report.kernel_count <= 2) {
    report.verdict = Verdict::Stable;
  } else {
    report.verdict = Verdict::Marginal;
  }
  return report;
}

std::string_view to_string(SolutionType t) {
  switch (t) {
    case SolutionType::TypeI:
      return "TypeI";
    case SolutionType::TypeII:
      return "TypeII";
    case SolutionType::TypeIII:
      return "TypeIII";
    case SolutionType::Degenerate:
      return "Degenerate";
  }
  return "unknown";
}

Classification classify(const SignalVelocities& v, double tol) {
  Classification c;
  c.c_plus = v.c_plus;
  c.c_minus = v.c_minus;
  if (std::abs(v.c_plus) <= tol || std::abs(v.c_minus) <= tol ||
      std::abs(v.c_plus - v.c_minus) <= tol) {
    c.type = SolutionType::Degenerate;
  } else if (v.c_minus < 0.0 && v.c_plus > 0.0) {
    c.type = SolutionType::TypeI;
    c.attenuating = std::abs(v.c_minus) < v.c_plus;
  } else if (v.c_minus > 0.0) {
    c.type = SolutionType::TypeII;
  } else {
    c.type = SolutionType::TypeIII;
  }
  return c;
}

}  // namespace flockwave
