#include "carnot/catalog.hpp"

namespace carnot::catalog {

GradedAlgebra heisenberg(int n) {
  if (n < 1) throw InputError("Heisenberg algebra needs n >= 1");
  const std::size_t dim = static_cast<std::size_t>(2 * n + 1);
  std::vector<std::string> names;
  if (n == 1) {
    names = {"X", "Y", "Z"};
  } else {
    for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
    for (int i = 1; i <= n; ++i) names.push_back("y" + std::to_string(i));
    names.push_back("z");
  }
  LieAlgebra alg(dim, Field{}, names);
  for (int i = 0; i < n; ++i) alg.set_bracket(i, n + i, unit_vec(dim, dim - 1));
  std::vector<int> layer0;
  for (int i = 0; i < 2 * n; ++i) layer0.push_back(i);
  return {alg, Grading({layer0, {2 * n}}, dim)};
}

GradedAlgebra heisenberg3_weighted() {
  GradedAlgebra h = heisenberg(1);
  return {h.algebra, Grading({{0}, {1}, {2}}, 3)};
}

GradedAlgebra exceptional_filiform(int r) {
  if (r < 1) throw InputError("filiform algebra needs r >= 1");
  const std::size_t dim = static_cast<std::size_t>(r + 3);
  // index 0 = y0, 1 = z0, 1 + i = y_i for i >= 1
  auto y = [](int i) { return i == 0 ? 0 : i + 1; };
  std::vector<std::string> names{"y0", "z0"};
  for (int i = 1; i <= r + 1; ++i) names.push_back("y" + std::to_string(i));
  LieAlgebra alg(dim, Field{}, names);
  for (int i = 0; i <= r; ++i) alg.set_bracket(1, y(i), unit_vec(dim, static_cast<std::size_t>(y(i + 1))));
  for (int i = 0; 2 * i < r; ++i) {
    const Vec top = unit_vec(dim, static_cast<std::size_t>(y(r + 1)));
    alg.set_bracket(y(i), y(r - i), (i % 2 == 0) ? top : Scalar(-1) * top);
  }
  std::vector<std::vector<int>> layers{{0, 1}};
  for (int i = 1; i <= r + 1; ++i) layers.push_back({y(i)});
  return {alg, Grading(layers, dim)};
}

GradedAlgebra quaternionic_heisenberg() {
  // quaternion units 1, i, j, k; mult[a][b] = (sign, unit)
  static const int unit[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static const int sign[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
  LieAlgebra alg(7, Field{}, {"q1", "qi", "qj", "qk", "zi", "zj", "zk"});
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      // conj(q_a) q_b = (a == 0 ? 1 : -1) q_a q_b
      const int s = (a == 0 ? 1 : -1) * sign[a][b];
      const int u = unit[a][b];
      if (u == 0) continue;
      Vec out(7);
      out[static_cast<std::size_t>(3 + u)] = s;
      alg.set_bracket(a, b, out);
    }
  }
  return {alg, Grading({{0, 1, 2, 3}, {4, 5, 6}}, 7)};
}

GradedAlgebra abelian(int n) {
  if (n < 1) throw InputError("abelian algebra needs n >= 1");
  std::vector<int> layer;
  for (int i = 0; i < n; ++i) layer.push_back(i);
  return {LieAlgebra(static_cast<std::size_t>(n), Field{}), Grading({layer}, static_cast<std::size_t>(n))};
}

}  // namespace carnot::catalog
