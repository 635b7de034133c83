#include "doseeffect/quadrature.hpp"

namespace doseeffect {
namespace {

struct Panel {
  double a, fa, m, fm, b, fb, whole;
};

double simpson(double a, double fa, double fm, double b, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double refine(const std::function<double(double)>& f, const Panel& p,
              double tol, int depth) {
  const double lm = 0.5 * (p.a + p.m);
  const double rm = 0.5 * (p.m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(p.a, p.fa, flm, p.m, p.fm);
  const double right = simpson(p.m, p.fm, frm, p.b, p.fb);
  const double delta = left + right - p.whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return refine(f, {p.a, p.fa, lm, flm, p.m, p.fm, left}, 0.5 * tol,
                depth - 1) +
         refine(f, {p.m, p.fm, rm, frm, p.b, p.fb, right}, 0.5 * tol,
                depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double abs_tol, int initial_panels,
                        int max_depth) {
  if (a == b) return 0.0;
  if (b < a) return -adaptive_simpson(f, b, a, abs_tol, initial_panels, max_depth);
  if (initial_panels < 1) initial_panels = 1;

  const double width = (b - a) / initial_panels;
  const double panel_tol = abs_tol / initial_panels;
  double total = 0.0;
  double lo = a;
  double flo = f(lo);
  for (int i = 0; i < initial_panels; ++i) {
    const double hi = (i + 1 == initial_panels) ? b : a + (i + 1) * width;
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    const double fhi = f(hi);
    const Panel p{lo, flo, mid, fmid, hi, fhi, simpson(lo, flo, fmid, hi, fhi)};
    total += refine(f, p, panel_tol, max_depth);
    lo = hi;
    flo = fhi;
  }
  return total;
}

}  // namespace doseeffect
