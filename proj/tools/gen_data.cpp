// Regenerates the shipped example data. Nothing here is typed in by hand:
// group data come from the cohomology solvers, Fibonacci from a
// Levenberg-Marquardt solve of the pentagon equations.
//
//   gen_data <output directory>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <random>

#include "fmpo/category_io.hpp"
#include "fmpo/cohomology.hpp"
#include "fmpo/stringnet.hpp"
#include "fmpo/supercohomology.hpp"
#include "fmpo/tensor_io.hpp"

using namespace fmpo;

namespace {

FusionCategoryData from_label(const SptLabel& x) { return group_category_from_supercocycle(x); }

// Z2 label with Z = 0 and alpha the nontrivial class of H^3(Z2, U(1)).
SptLabel double_semion() {
  const FiniteGroup g = FiniteGroup::builtin("Z2");
  const Cohomology h = h3_u1(g);
  if (h.generators().size() != 1) throw std::runtime_error("unexpected H3(Z2, U(1))");
  SptLabel x = SptLabel::trivial(g, h.modulus());
  x.alpha = h.generators()[0];
  return x;
}

// Order-4 element of Hbar3(Z2) whose phase on (1,1,1) is +i.
SptLabel gu_wen() {
  const FiniteGroup g = FiniteGroup::builtin("Z2");
  const SupercohomologyGroup s(g);
  for (int k = 0; k < s.size(); ++k) {
    if (s.element_order(k) != 4) continue;
    const SptLabel x = s.representative(k);
    if (4 * x.alpha[7] == x.q) return x;
  }
  throw std::runtime_error("no order-4 class with alpha(1,1,1) = i");
}

FusionRules fibonacci_rules() {
  FusionRules r;
  r.num_labels = 2;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) {
        // 1 x a = a, tau x tau = 1 + tau
        const bool allowed = (a == 0) ? b == c : (b == 0 ? c == 1 : true);
        if (!allowed) continue;
        r.N[{a, b, c}] = 1;
        r.deg_parity[{a, b, c, 0}] = 0;
      }
  return r;
}

// All admissible entries are 1 except [F^{ttt}_t], parametrized as the
// symmetric matrix [[p, q], [q, s]] (this fixes the remaining gauge ratio).
AssociatorTable fibonacci_table(double p, double q, double s) {
  AssociatorTable t;
  t.rules = fibonacci_rules();
  for (const FKey& k : [&] {
         AssociatorTable probe;
         probe.rules = t.rules;
         return probe.admissible_keys();
       }()) {
    double v = 1.0;
    if (k[0] == 1 && k[1] == 1 && k[2] == 1 && k[3] == 1) {
      if (k[4] == 0 && k[5] == 0) v = p;
      else if (k[4] == 1 && k[5] == 1) v = s;
      else v = q;
    }
    t.F[k] = v;
  }
  return t;
}

Eigen::VectorXd pentagon_vector(const Eigen::Vector3d& x) {
  const auto eq = pentagon_equations(fibonacci_table(x[0], x[1], x[2]));
  Eigen::VectorXd out(2 * eq.size());
  for (std::size_t k = 0; k < eq.size(); ++k) {
    out[2 * k] = eq[k].real();
    out[2 * k + 1] = eq[k].imag();
  }
  return out;
}

Eigen::Vector3d levenberg_marquardt(Eigen::Vector3d x) {
  double lambda = 1e-3;
  Eigen::VectorXd r = pentagon_vector(x);
  for (int it = 0; it < 500 && r.norm() > 1e-15; ++it) {
    Eigen::MatrixXd J(r.size(), 3);
    for (int k = 0; k < 3; ++k) {
      Eigen::Vector3d h = Eigen::Vector3d::Zero();
      h[k] = 1e-7;
      J.col(k) = (pentagon_vector(x + h) - pentagon_vector(x - h)) / 2e-7;
    }
    const Eigen::MatrixXd A = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;
    const Eigen::Vector3d step =
        -(A + lambda * Eigen::MatrixXd(A.diagonal().asDiagonal())).ldlt().solve(g);
    const Eigen::VectorXd r2 = pentagon_vector(x + step);
    if (r2.norm() < r.norm()) {
      x += step;
      r = r2;
      lambda = std::max(lambda / 3, 1e-12);
    } else {
      lambda *= 4;
    }
  }
  return x;
}

// Unitary solution (|p| < 1) with q > 0.
FusionCategoryData fibonacci() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int attempt = 0; attempt < 200; ++attempt) {
    Eigen::Vector3d x = levenberg_marquardt({u(rng), u(rng), u(rng)});
    const AssociatorTable t = fibonacci_table(x[0], x[1], x[2]);
    if (pentagon_residual(t) > 1e-13 || std::abs(x[0]) >= 1 || std::abs(x[1]) < 1e-6) continue;
    if (x[1] < 0) x[1] = -x[1];  // q -> -q is the gauge flip of V_{tt}^t
    FusionCategoryData d;
    d.names = {"1", "tau"};
    d.label_parity = {0, 0};
    d.table = fibonacci_table(x[0], x[1], x[2]);
    d.unitary = true;
    if (pentagon_residual(d.table) > 1e-13) continue;
    return d;
  }
  throw std::runtime_error("pentagon solver did not converge");
}

void emit(const std::filesystem::path& dir, const std::string& name, const FusionCategoryData& d) {
  const double pent = pentagon_residual(d.table);
  if (pent > 1e-12) throw std::runtime_error(name + ": pentagon residual " + std::to_string(pent));
  write_file((dir / (name + ".json")).string(), dump_category(d));
  std::cout << name << ": pentagon residual " << pent << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: gen_data <output directory>\n";
    return 2;
  }
  try {
    const std::filesystem::path dir(argv[1]);
    std::filesystem::create_directories(dir);
    const FiniteGroup z1 = FiniteGroup::builtin("Z1"), z2 = FiniteGroup::builtin("Z2");
    emit(dir, "trivial", from_label(SptLabel::trivial(z1, 2)));
    emit(dir, "z2_bosonic_trivial", from_label(SptLabel::trivial(z2, 2)));
    emit(dir, "z2_double_semion", from_label(double_semion()));
    const SptLabel gw = gu_wen();
    FusionCategoryData gwd = from_label(gw);
    emit(dir, "guwen_z2", gwd);
    emit(dir, "fibonacci", fibonacci());

    write_file((dir / "label_guwen_z2.json").string(), dump_label(gw, "Z2"));
    write_file((dir / "label_trivial_z2.json").string(), dump_label(SptLabel::trivial(z2, gw.q), "Z2"));
    write_file((dir / "label_double_semion.json").string(), dump_label(double_semion(), "Z2"));

    // one corrupted copy for the failure path
    const FKey k{1, 1, 1, 1, 0, 0, 0, 0, 0, 0};
    gwd.table.F[k] = 1.0;
    write_file((dir / "guwen_z2_corrupted.json").string(), dump_category(gwd));
    std::cout << "guwen_z2_corrupted: pentagon residual " << pentagon_residual(gwd.table) << '\n';
  } catch (const std::exception& e) {
    std::cerr << "gen_data: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
