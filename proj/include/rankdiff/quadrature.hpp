#pragma once

#include <cmath>
#include <stdexcept>

namespace rankdiff {

namespace gk {

// Gauss-Kronrod 7-15 nodes/weights (positive half; node 0 at the end).
constexpr double kNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0,
};
constexpr double kWeights15[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
};
// Gauss weights attach to nodes 1,3,5,7.
constexpr double kWeights7[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469,
};

}  // namespace gk

struct PanelEstimate {
  double value = 0.0;
  double error = 0.0;
};

template <typename F>
PanelEstimate gk15_panel(const F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double kronrod = 0.0;
  double gauss = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double off = half * gk::kNodes[i];
    const double lo = f(mid - off);
    const double hi = f(mid + off);
    const double pair = i == 7 ? lo : lo + hi;  // node 0 counted once
    kronrod += gk::kWeights15[i] * pair;
    if (i % 2 == 1) gauss += gk::kWeights7[i / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  const double diff = std::fabs(kronrod - gauss);
  // standard conservative error model for the embedded rule
  const double err = diff == 0.0 ? 0.0 : std::min(diff, std::pow(200.0 * diff, 1.5));
  return {kronrod, err};
}

// Adaptive bisection on top of the 7-15 pair, absolute tolerance.
template <typename F>
double integrate_adaptive(const F& f, double a, double b, double abs_tol,
                          int max_depth = 48) {
  if (!(abs_tol > 0.0)) throw std::invalid_argument("integrate_adaptive: tol must be > 0");
  struct Frame {
    double a, b, tol;
    int depth;
  };
  // explicit stack; panels that meet their share of the budget are accumulated
  Frame stack[64 * 4];
  int top = 0;
  stack[top++] = {a, b, abs_tol, 0};
  double total = 0.0;
  while (top > 0) {
    const Frame fr = stack[--top];
    const PanelEstimate est = gk15_panel(f, fr.a, fr.b);
    if (est.error <= fr.tol || fr.depth >= max_depth) {
      total += est.value;
      continue;
    }
    const double mid = 0.5 * (fr.a + fr.b);
    const double child_tol = 0.5 * fr.tol;
    stack[top++] = {fr.a, mid, child_tol, fr.depth + 1};
    stack[top++] = {mid, fr.b, child_tol, fr.depth + 1};
  }
  return total;
}

}  // namespace rankdiff
