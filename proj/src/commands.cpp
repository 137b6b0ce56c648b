#include "fmpo/commands.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <sstream>

#include "fmpo/category_io.hpp"
#include "fmpo/cohomology.hpp"
#include "fmpo/stringnet.hpp"
#include "fmpo/supercohomology.hpp"
#include "fmpo/tensor_io.hpp"

namespace fmpo {

namespace {

RunReport run(const std::string& name, const std::function<void(RunReport&)>& body) {
  RunReport r;
  r.command = name;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const InputError& e) {
    r.error = e.what();
    r.exit_code = 2;
  } catch (const ConsistencyError& e) {
    r.error = e.what();
    r.exit_code = 1;
  } catch (const std::exception& e) {
    r.error = e.what();
    r.exit_code = 2;
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.finish();
  return r;
}

std::string parent_dir(const std::string& path) {
  const auto p = std::filesystem::path(path).parent_path();
  return p.empty() ? "." : p.string();
}

FiniteGroup group_input(RunReport& r, const std::string& ref) {
  FiniteGroup g = resolve_group(ref);
  if (std::filesystem::exists(ref)) r.add_input_file(ref);
  else r.add_input_value("group", ref);
  return g;
}

std::string factors_text(const std::vector<i64>& f) {
  std::ostringstream os;
  os << '[';
  for (std::size_t k = 0; k < f.size(); ++k) os << (k ? "," : "") << f[k];
  os << ']';
  return os.str();
}

// Nonzero entries of a cochain over G^d as "(g,h,..)=v" with element names.
std::string cochain_text(const FiniteGroup& g, const Cochain& c, int degree) {
  std::ostringstream os;
  const int n = g.order();
  bool first = true;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (!c[k]) continue;
    std::vector<int> args(degree);
    std::size_t rest = k;
    for (int d = degree - 1; d >= 0; --d) {
      args[d] = static_cast<int>(rest % n);
      rest /= n;
    }
    os << (first ? "" : " ") << '(';
    for (int d = 0; d < degree; ++d) os << (d ? "," : "") << g.names()[args[d]];
    os << ")=" << c[k];
    first = false;
  }
  return first ? "0" : os.str();
}

void add_cohomology(RunReport& r, const std::string& key, const FiniteGroup& g, const Cohomology& h) {
  r.add_result(key, h.name());
  r.add_result(key + ".invariant_factors", factors_text(h.invariant_factors()));
  for (std::size_t k = 0; k < h.generators().size(); ++k)
    r.add_result(key + ".generator" + std::to_string(k) + " (order " + std::to_string(h.orders()[k]) + ", mod " +
                     std::to_string(h.modulus()) + ")",
                 cochain_text(g, h.generators()[k], h.degree()));
}

FusionCategoryData category_input(RunReport& r, const std::string& path) {
  r.add_input_file(path);
  FusionCategoryData d = parse_category(read_file(path));
  const auto problems = validate_table(d.table);
  if (!problems.empty()) {
    std::string msg = "invalid F-symbol table:";
    for (const auto& p : problems) msg += " " + p + ";";
    throw InputError(msg);
  }
  return d;
}

Fmpo fmpo_input(RunReport& r, const std::string& path) {
  r.add_input_file(path);
  return parse_fmpo(read_file(path));
}

std::size_t dense_dim(const Fmpo& m, int L) {
  std::size_t d = 1;
  for (int k = 0; k < L; ++k) d *= static_cast<std::size_t>(m.site.phys_dim());
  return d;
}

}  // namespace

RunReport cmd_cohomology(const std::string& group, int degree, const std::string& coefficients,
                         const GlobalOptions& opt) {
  return run("cohomology", [&](RunReport& r) {
    if (degree < 1 || degree > 3) throw InputError("degree must be 1, 2 or 3");
    const FiniteGroup g = group_input(r, group);
    CohomologyOptions co;
    co.seed = opt.seed;
    std::string key = "H" + std::to_string(degree) + "(" + g.label() + ",";
    if (coefficients == "Z2") {
      add_cohomology(r, key + "Z2)", g, Cohomology(g, degree, 2, false, co));
    } else if (coefficients == "U1") {
      if (opt.phase_modulus_factor < 1) throw InputError("phase modulus factor must be positive");
      add_cohomology(r, key + "U(1))", g,
                     Cohomology(g, degree, static_cast<i64>(opt.phase_modulus_factor) * g.order(), true, co));
    } else {
      throw InputError("coefficients must be Z2 or U1");
    }
  });
}

RunReport cmd_spt_classify(const std::string& group, const GlobalOptions& opt) {
  return run("spt-classify", [&](RunReport& r) {
    const FiniteGroup g = group_input(r, group);
    CohomologyOptions co;
    co.seed = opt.seed;
    const Cohomology h1(g, 1, 2, false, co), h2(g, 2, 2, false, co);
    add_cohomology(r, "H1(G,Z2)", g, h1);
    add_cohomology(r, "H2(G,Z2)", g, h2);
    const SupercohomologyGroup s = build_supercohomology(g, opt.phase_modulus_factor, 8, opt.seed);
    r.add_result("H3(G,U(1))", s.h3().name());
    r.add_result("Hbar3(G,U(1))", s.name());
    r.add_result("Hbar3(G,U(1)).invariant_factors", factors_text(s.invariant_factors()));
    r.add_result("Hbar3(G,U(1)).modulus", std::to_string(s.modulus()));
    r.add_result("Hbar3(G,U(1)).obstructed_Z_classes", std::to_string(s.obstructed_z_classes().size()));
    int best = 0;
    for (int k = 0; k < s.size(); ++k)
      if (s.element_order(k) > s.element_order(best)) best = k;
    const SptLabel x = s.representative(best);
    const std::string tag = "Hbar3 element of maximal order " + std::to_string(s.element_order(best));
    r.add_result(tag + ": Z", cochain_text(g, x.Z, 2));
    r.add_result(tag + ": alpha mod " + std::to_string(x.q), cochain_text(g, x.alpha, 3));
    r.add_result("classification", "(" + h1.name() + ", " + h2.name() + ", " + s.name() + ")");
    r.add_result("H2/H3/Hbar3", "(" + h2.name() + ", " + s.h3().name() + ", " + s.name() + ")");
  });
}

RunReport cmd_spt_stack(const std::string& label_a, const std::string& label_b, const std::string& out_path,
                        const GlobalOptions& opt) {
  return run("spt-stack", [&](RunReport& r) {
    r.add_input_file(label_a);
    r.add_input_file(label_b);
    const SptLabel a = parse_label(read_file(label_a), parent_dir(label_a));
    const SptLabel b = parse_label(read_file(label_b), parent_dir(label_b));
    if (!(a.group == b.group)) throw InputError("labels refer to different groups");
    for (const auto* x : {&a, &b}) {
      const LabelDiagnostics d = verify_super_label(*x);
      for (const auto& m : d.messages) r.warnings.push_back("input: " + m);
      if (!d.ok()) throw InputError("input label is not a valid supercohomology label");
    }
    const SptLabel c = stack(a, b);
    const LabelDiagnostics d = verify_super_label(c);
    r.add_residual("stacked label violations", static_cast<double>(d.messages.size()), 0.0);
    for (const auto& m : d.messages) r.warnings.push_back(m);
    const FiniteGroup& g = c.group;
    r.add_result("f", cochain_text(g, c.f, 1));
    r.add_result("Z", cochain_text(g, c.Z, 2));
    r.add_result("alpha mod " + std::to_string(c.q), cochain_text(g, c.alpha, 3));
    bool z_trivial = true, f_trivial = true;
    for (i64 v : c.Z) z_trivial = z_trivial && v == 0;
    for (i64 v : c.f) f_trivial = f_trivial && v == 0;
    bool alpha_trivial = true;
    for (i64 v : c.alpha) alpha_trivial = alpha_trivial && v == 0;
    if (f_trivial && z_trivial) {
      CohomologyOptions co;
      co.seed = opt.seed;
      const Cohomology h(g, 3, c.q, true, co);
      const auto cls = h.class_of(c.alpha);
      bool trivial = true;
      for (i64 v : cls) trivial = trivial && v == 0;
      r.add_result("bosonic H3 class", h.name() + " " + factors_text(cls));
      r.add_result("phase", trivial ? "trivial" : "bosonic");
    } else {
      r.add_result("phase", "fermionic");
    }
    r.add_result("identical to trivial label", f_trivial && z_trivial && alpha_trivial ? "yes" : "no");
    if (!out_path.empty()) {
      const std::string ref = g.label().empty() ? "group.json" : g.label();
      write_file(out_path, dump_label(c, ref));
    }
  });
}

RunReport cmd_pentagon(const std::string& fsymbols, const GlobalOptions& opt) {
  return run("pentagon", [&](RunReport& r) {
    const FusionCategoryData d = category_input(r, fsymbols);
    r.add_result("labels", std::to_string(d.names.size()));
    r.add_result("F entries", std::to_string(d.table.F.size()));
    r.add_residual("pentagon", pentagon_residual(d.table), opt.tolerance);
    if (d.unitary) r.add_residual("unitarity", unitarity_residual(d.table), opt.tolerance);
  });
}

RunReport cmd_stringnet_verify(const std::string& fsymbols, const std::vector<std::string>& checks_in,
                               const GlobalOptions& opt) {
  return run("stringnet-verify", [&](RunReport& r) {
    std::vector<std::string> checks = checks_in;
    if (checks.empty()) checks = {"zipper", "fmove", "pullthrough", "unitarity"};
    const FusionCategoryData d = category_input(r, fsymbols);
    const std::size_t cap = std::max<std::size_t>(opt.max_dense_dim * opt.max_dense_dim * 4, 1u << 20);
    for (const auto& c : checks) {
      if (c == "zipper") {
        r.add_residual("zipper", verify_zipper_sn(d, cap), opt.tolerance);
      } else if (c == "fmove") {
        r.add_residual("fmove", verify_fmove(d, cap), opt.tolerance);
      } else if (c == "pullthrough") {
        r.add_residual("pullthrough", verify_pulling_through(d, cap), opt.tolerance);
      } else if (c == "unitarity") {
        if (d.unitary) r.add_residual("unitarity", unitarity_residual(d.table), opt.tolerance);
        else r.warnings.push_back("unitarity skipped: data not marked unitary");
      } else if (c == "grouplaw") {
        const MultiplicationCheck m = fmpo_multiplication_check(d, 3, opt.max_dense_dim);
        r.add_residual("group law proportionality", m.residual, 1e-8);
        for (const auto& [k, s] : m.scalars) {
          std::ostringstream os;
          os << s.real() << (s.imag() < 0 ? "-" : "+") << std::abs(s.imag()) << "i";
          r.add_result("O_" + d.names[k[0]] + " O_" + d.names[k[1]] + " / O_product", os.str());
        }
      } else if (c == "roundtrip") {
        std::vector<FmpoSiteTensor> blocks;
        for (int a = 0; a < d.table.rules.num_labels; ++a) blocks.push_back(build_fmpo_tensor(d, a));
        const ZipperData z = solve_all_zippers(blocks);
        for (const auto& w : z.warnings) r.warnings.push_back(w);
        const AssociatorTable F = compute_f_symbols(z);
        r.add_residual("roundtrip fmove", fmove_residual(z, F), 1e-8);
        const GaugeComparison g = gauge_equivalent(F, d.table);
        r.add_result("roundtrip gauge equivalent", g.equivalent ? "yes" : "no (" + g.reason + ")");
        r.add_residual("roundtrip gauge mismatch", std::max(g.magnitude_residual, g.phase_residual), 1e-8);
        if (!g.equivalent) r.pass = false;
      } else {
        throw InputError("unknown check '" + c + "'");
      }
    }
  });
}

RunReport cmd_fmpo_multiply(const std::string& a_path, const std::string& b_path, const std::string& out_path,
                            const GlobalOptions& opt) {
  return run("fmpo multiply", [&](RunReport& r) {
    const Fmpo a = fmpo_input(r, a_path), b = fmpo_input(r, b_path);
    if (!(a.site.physical_space() == b.site.physical_space())) throw InputError("physical spaces differ");
    const Fmpo c = multiply(a, b);
    r.add_result("bond dimension", std::to_string(c.site.bond_dim()));
    r.add_result("closure", c.closure == Closure::Supertrace ? "supertrace" : "boundary");
    for (int L = 1; L <= 3; ++L) {
      if (dense_dim(c, L) > opt.max_dense_dim) {
        r.warnings.push_back("dense check at L=" + std::to_string(L) + " skipped (max-dense-dim)");
        break;
      }
      const Mat lhs = close_to_operator(c, L, opt.max_dense_dim).m;
      const Mat rhs = close_to_operator(a, L, opt.max_dense_dim).m * close_to_operator(b, L, opt.max_dense_dim).m;
      const double scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
      r.add_residual("dense product L=" + std::to_string(L), (lhs - rhs).cwiseAbs().maxCoeff() / scale,
                     opt.tolerance);
    }
    if (!out_path.empty()) write_file(out_path, dump_fmpo(c));
  });
}

RunReport cmd_fmpo_decompose(const std::string& path, const std::string& out_prefix, const GlobalOptions& opt) {
  return run("fmpo decompose", [&](RunReport& r) {
    const Fmpo m = fmpo_input(r, path);
    DecomposeOptions d;
    d.seed = opt.seed;
    const auto blocks = decompose_blocks(m, d);
    r.add_result("blocks", std::to_string(blocks.size()));
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      const auto& b = blocks[k];
      const GradedSpace& v = b.fmpo.site.virtual_space();
      r.add_result("block " + std::to_string(k), std::string(b.type == AlgebraType::Odd ? "Odd" : "Even") +
                                                     " (" + std::to_string(v.even_dim()) + "|" +
                                                     std::to_string(v.odd_dim()) + ")");
      if (!out_prefix.empty()) write_file(out_prefix + "_" + std::to_string(k) + ".json", dump_fmpo(b.fmpo));
      // which ring closures give a nonzero operator
      std::vector<std::pair<std::string, Fmpo>> closures{{"supertrace", Fmpo::with_supertrace(b.fmpo.site)}};
      if (const auto z = odd_central_element(b.fmpo.site, d.tol))
        closures.emplace_back("odd centre", Fmpo::with_boundary(b.fmpo.site, from_matrix(*z, v, v, 1)));
      for (const auto& [name, c] : closures) {
        std::string norms;
        for (int L = 1; L <= 3 && dense_dim(c, L) <= opt.max_dense_dim; ++L) {
          std::ostringstream os;
          os << (norms.empty() ? "" : ", ") << "L=" << L << " "
             << close_to_operator(c, L, opt.max_dense_dim).m.cwiseAbs().maxCoeff();
          norms += os.str();
        }
        r.add_result("block " + std::to_string(k) + " " + name + " closure max |entry|", norms);
      }
    }
    // the blocks must reassemble the closed operator
    for (int L = 1; L <= 3 && dense_dim(m, L) <= opt.max_dense_dim; ++L) {
      const Mat full = close_to_operator(m, L, opt.max_dense_dim).m;
      Mat sum = Mat::Zero(full.rows(), full.cols());
      for (const auto& b : blocks) sum += close_to_operator(b.fmpo, L, opt.max_dense_dim).m;
      const double scale = std::max(1.0, full.cwiseAbs().maxCoeff());
      r.add_residual("block sum L=" + std::to_string(L), (sum - full).cwiseAbs().maxCoeff() / scale, 1e-8);
    }
  });
}

RunReport cmd_fmpo_fuse(const std::string& a_path, const std::string& b_path, const std::vector<std::string>& library,
                        const GlobalOptions& opt) {
  return run("fmpo fuse", [&](RunReport& r) {
    const Fmpo a = fmpo_input(r, a_path), b = fmpo_input(r, b_path);
    if (library.empty()) throw InputError("fuse needs a library of blocks");
    std::vector<FmpoSiteTensor> lib;
    for (const auto& p : library) lib.push_back(fmpo_input(r, p).site);
    const FusionRuleFit fit = fusion_rules(a.site, b.site, lib, 3, 1e-8, opt.max_dense_dim);
    for (std::size_t k = 0; k < lib.size(); ++k) {
      std::ostringstream os;
      os << fit.rounded[k] << " (fit " << fit.multiplicity[k] << ", graded " << fit.graded[k] << ")";
      r.add_result("N[" + library[k] + "]", os.str());
    }
    r.add_residual("fit residual", fit.residual, 1e-8);
  });
}

RunReport cmd_fmpo_extract_f(const std::vector<std::string>& block_paths, const std::string& out_path,
                             const std::string& compare, const GlobalOptions&) {
  return run("fmpo extract-f", [&](RunReport& r) {
    if (block_paths.empty()) throw InputError("extract-f needs block files");
    std::vector<FmpoSiteTensor> blocks;
    for (const auto& p : block_paths) blocks.push_back(fmpo_input(r, p).site);
    const ZipperData z = solve_all_zippers(blocks);
    for (const auto& w : z.warnings) r.warnings.push_back(w);
    const AssociatorTable F = compute_f_symbols(z);
    r.add_result("channels", std::to_string(F.rules.N.size()));
    r.add_result("F entries", std::to_string(F.F.size()));
    r.add_residual("fmove", fmove_residual(z, F), 1e-8);
    r.add_residual("pentagon", pentagon_residual(F), 1e-8);
    FusionCategoryData out;
    out.table = F;
    for (std::size_t k = 0; k < blocks.size(); ++k) out.names.push_back(std::to_string(k));
    out.label_parity.assign(blocks.size(), 0);
    out.unitary = unitarity_residual(F) < 1e-8;
    if (!compare.empty()) {
      const FusionCategoryData ref = category_input(r, compare);
      const GaugeComparison g = gauge_equivalent(F, ref.table);
      r.add_result("gauge equivalent to reference", g.equivalent ? "yes" : "no (" + g.reason + ")");
      r.add_residual("gauge mismatch", std::max(g.magnitude_residual, g.phase_residual), 1e-8);
      if (!g.equivalent) r.pass = false;
      out.names = ref.names;
      out.label_parity = ref.label_parity;
    }
    if (!out_path.empty()) write_file(out_path, dump_category(out));
  });
}

RunReport cmd_fmpo_from_category(const std::string& fsymbols, const std::string& out_prefix,
                                 const GlobalOptions&) {
  return run("fmpo from-category", [&](RunReport& r) {
    const FusionCategoryData d = category_input(r, fsymbols);
    for (int a = 0; a < d.table.rules.num_labels; ++a) {
      const Fmpo m = Fmpo::with_supertrace(build_fmpo_tensor(d, a));
      const GradedSpace& v = m.site.virtual_space();
      r.add_result("block " + d.names[a], "bond (" + std::to_string(v.even_dim()) + "|" +
                                              std::to_string(v.odd_dim()) + ")");
      if (!out_prefix.empty()) write_file(out_prefix + "_" + std::to_string(a) + ".json", dump_fmpo(m));
    }
  });
}

}  // namespace fmpo
