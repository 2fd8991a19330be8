#include "numloop/simplex.hpp"

namespace numloop {

namespace {

struct Tableau {
  size_t ncols = 0;
  std::vector<std::vector<Rat>> a;
  std::vector<Rat> b;
  std::vector<size_t> basis;  // column basic in each row

  size_t rows() const { return a.size(); }

  void pivot(size_t r, size_t c) {
    const Rat piv = a[r][c];
    for (auto& v : a[r]) v /= piv;
    b[r] /= piv;
    for (size_t i = 0; i < rows(); ++i) {
      if (i == r) continue;
      const Rat f = a[i][c];
      if (f == 0) continue;
      for (size_t j = 0; j < ncols; ++j)
        if (a[r][j] != 0) a[i][j] -= f * a[r][j];
      b[i] -= f * b[r];
    }
    basis[r] = c;
  }
};

// Minimize obj with Bland's rule (first negative reduced cost enters; on
// ratio ties the smallest basis column leaves), so no cycling. Only columns
// below `limit` may enter. Stops at optimality; an unbounded direction also
// stops (callers' objectives are bounded below on the feasible set).
void run_simplex(Tableau& t, const std::vector<Rat>& obj, size_t limit) {
  for (;;) {
    size_t enter = SIZE_MAX;
    for (size_t j = 0; j < limit && enter == SIZE_MAX; ++j) {
      Rat r = obj[j];
      for (size_t i = 0; i < t.rows(); ++i) {
        const Rat& cb = obj[t.basis[i]];
        if (cb != 0 && t.a[i][j] != 0) r -= cb * t.a[i][j];
      }
      if (r < 0) enter = j;
    }
    if (enter == SIZE_MAX) return;

    size_t leave = SIZE_MAX;
    Rat best = 0;
    for (size_t i = 0; i < t.rows(); ++i) {
      if (t.a[i][enter] <= 0) continue;
      Rat ratio = t.b[i] / t.a[i][enter];
      if (leave == SIZE_MAX || ratio < best ||
          (ratio == best && t.basis[i] < t.basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == SIZE_MAX) return;
    t.pivot(leave, enter);
  }
}

}  // namespace

std::optional<std::vector<Rat>> solve_lp(const LinearProgram& lp) {
  const size_t n = lp.nvars;
  const size_t m = lp.rows.size();

  Tableau t;
  t.ncols = n + m;
  t.a.assign(m, std::vector<Rat>(n + m, Rat(0)));
  t.b.resize(m);
  t.basis.resize(m);
  for (size_t i = 0; i < m; ++i) {
    const bool flip = lp.rhs[i] < 0;
    for (size_t j = 0; j < n && j < lp.rows[i].size(); ++j)
      t.a[i][j] = flip ? -lp.rows[i][j] : lp.rows[i][j];
    t.b[i] = flip ? -lp.rhs[i] : lp.rhs[i];
    t.a[i][n + i] = 1;
    t.basis[i] = n + i;
  }

  // Phase 1: minimize the sum of artificials; positive optimum = infeasible.
  std::vector<Rat> obj1(n + m, Rat(0));
  for (size_t j = n; j < n + m; ++j) obj1[j] = 1;
  run_simplex(t, obj1, n + m);
  Rat z = 0;
  for (size_t i = 0; i < t.rows(); ++i) z += obj1[t.basis[i]] * t.b[i];
  if (z != 0) return std::nullopt;

  // Drive leftover artificials (basic at zero) out of the basis; rows with no
  // real pivot candidate are linearly dependent and can be dropped.
  for (size_t i = t.rows(); i-- > 0;) {
    if (t.basis[i] < n) continue;
    size_t c = SIZE_MAX;
    for (size_t j = 0; j < n && c == SIZE_MAX; ++j)
      if (t.a[i][j] != 0) c = j;
    if (c != SIZE_MAX) {
      t.pivot(i, c);
    } else {
      t.a.erase(t.a.begin() + static_cast<ptrdiff_t>(i));
      t.b.erase(t.b.begin() + static_cast<ptrdiff_t>(i));
      t.basis.erase(t.basis.begin() + static_cast<ptrdiff_t>(i));
    }
  }

  // Phase 2 over the real columns only.
  if (!lp.objective.empty()) {
    std::vector<Rat> obj2(n + m, Rat(0));
    for (size_t j = 0; j < n && j < lp.objective.size(); ++j) obj2[j] = lp.objective[j];
    run_simplex(t, obj2, n);
  }

  std::vector<Rat> x(n, Rat(0));
  for (size_t i = 0; i < t.rows(); ++i)
    if (t.basis[i] < n) x[t.basis[i]] = t.b[i];
  return x;
}

}  // namespace numloop
