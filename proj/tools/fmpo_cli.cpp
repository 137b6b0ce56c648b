// Command-line front end. Talks to the library only through fmpo.h.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fmpo/fmpo.h"

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ",") + s;
  return out;
}

std::vector<const char*> c_strings(const std::vector<std::string>& v) {
  std::vector<const char*> out;
  for (const auto& s : v) out.push_back(s.c_str());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fermionic MPO, fusion-category and supercohomology toolkit"};
  app.require_subcommand(1);

  fmpo_options opt = fmpo_options_default();
  std::string report_path;
  bool json_out = false;
  app.add_option("--tolerance", opt.tolerance, "residual tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", opt.seed, "seed for randomized steps");
  app.add_option("--max-dense-dim", opt.max_dense_dim, "largest dense operator dimension")->check(CLI::PositiveNumber);
  app.add_option("--phase-modulus-factor", opt.phase_modulus_factor, "U(1) phases are kept mod factor*|G|")
      ->check(CLI::Range(1, 64));
  app.add_option("--report", report_path, "write the machine-readable report here");
  app.add_flag("--json", json_out, "print the JSON report instead of text");

  std::string group, coeff = "U1";
  int degree = 3;
  auto* coh = app.add_subcommand("cohomology", "H^d(G, Z2) or H^d(G, U(1))");
  coh->add_option("--group,-g", group, "builtin name or group file")->required();
  coh->add_option("--degree,-d", degree)->check(CLI::Range(1, 3));
  coh->add_option("--coefficients,-c", coeff)->check(CLI::IsMember({"Z2", "U1"}));

  auto* cls = app.add_subcommand("spt-classify", "(H1(G,Z2), H2(G,Z2), Hbar3(G,U(1)))");
  cls->add_option("--group,-g", group, "builtin name or group file")->required();

  std::string label_a, label_b, out;
  auto* stk = app.add_subcommand("spt-stack", "stack two supercohomology labels");
  stk->add_option("a", label_a)->required()->check(CLI::ExistingFile);
  stk->add_option("b", label_b)->required()->check(CLI::ExistingFile);
  stk->add_option("-o,--output", out);

  std::string fsym;
  auto* pen = app.add_subcommand("pentagon", "check the fermionic pentagon equation");
  pen->add_option("fsymbols", fsym)->required()->check(CLI::ExistingFile);

  std::vector<std::string> checks;
  auto* snv = app.add_subcommand("stringnet-verify", "string-net tensor identities");
  snv->add_option("fsymbols", fsym)->required()->check(CLI::ExistingFile);
  snv->add_option("--checks", checks, "zipper, fmove, pullthrough, unitarity, grouplaw, roundtrip")
      ->delimiter(',')
      ->check(CLI::IsMember({"zipper", "fmove", "pullthrough", "unitarity", "grouplaw", "roundtrip"}));

  auto* fm = app.add_subcommand("fmpo", "fMPO algebra");
  fm->require_subcommand(1);
  std::string a, b, prefix, compare;
  std::vector<std::string> files;
  auto* mul = fm->add_subcommand("multiply", "graded product of two fMPOs");
  mul->add_option("a", a)->required()->check(CLI::ExistingFile);
  mul->add_option("b", b)->required()->check(CLI::ExistingFile);
  mul->add_option("-o,--output", out);
  auto* dec = fm->add_subcommand("decompose", "split into graded-simple blocks");
  dec->add_option("fmpo", a)->required()->check(CLI::ExistingFile);
  dec->add_option("--out-prefix", prefix);
  auto* fuse = fm->add_subcommand("fuse", "fusion multiplicities of a x b in a block library");
  fuse->add_option("a", a)->required()->check(CLI::ExistingFile);
  fuse->add_option("b", b)->required()->check(CLI::ExistingFile);
  fuse->add_option("--library", files)->required()->check(CLI::ExistingFile);
  auto* ext = fm->add_subcommand("extract-f", "F-symbols from block fMPOs via the zipper condition");
  ext->add_option("blocks", files)->required()->check(CLI::ExistingFile);
  ext->add_option("-o,--output", out);
  ext->add_option("--compare", compare, "reference F-symbol file")->check(CLI::ExistingFile);
  auto* fc = fm->add_subcommand("from-category", "string-net fMPO blocks from F-symbols");
  fc->add_option("fsymbols", fsym)->required()->check(CLI::ExistingFile);
  fc->add_option("--out-prefix", prefix)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  fmpo_report* r = nullptr;
  if (*coh) r = fmpo_cmd_cohomology(group.c_str(), degree, coeff.c_str(), &opt);
  else if (*cls) r = fmpo_cmd_spt_classify(group.c_str(), &opt);
  else if (*stk) r = fmpo_cmd_spt_stack(label_a.c_str(), label_b.c_str(), out.c_str(), &opt);
  else if (*pen) r = fmpo_cmd_pentagon(fsym.c_str(), &opt);
  else if (*snv) r = fmpo_cmd_stringnet_verify(fsym.c_str(), join(checks).c_str(), &opt);
  else if (*mul) r = fmpo_cmd_fmpo_multiply(a.c_str(), b.c_str(), out.c_str(), &opt);
  else if (*dec) r = fmpo_cmd_fmpo_decompose(a.c_str(), prefix.c_str(), &opt);
  else if (*fuse) {
    const auto lib = c_strings(files);
    r = fmpo_cmd_fmpo_fuse(a.c_str(), b.c_str(), lib.data(), static_cast<int>(lib.size()), &opt);
  } else if (*ext) {
    const auto blocks = c_strings(files);
    r = fmpo_cmd_fmpo_extract_f(blocks.data(), static_cast<int>(blocks.size()), out.c_str(), compare.c_str(), &opt);
  } else if (*fc) {
    r = fmpo_cmd_fmpo_from_category(fsym.c_str(), prefix.c_str(), &opt);
  }
  if (!r) return 2;

  std::cout << (json_out ? fmpo_report_json(r) : fmpo_report_text(r));
  if (json_out) std::cout << '\n';
  if (!report_path.empty()) {
    std::ofstream f(report_path);
    if (!f) {
      std::cerr << "cannot write report " << report_path << '\n';
      fmpo_report_free(r);
      return 2;
    }
    f << fmpo_report_json(r) << '\n';
  }
  const int rc = fmpo_report_exit_code(r);
  fmpo_report_free(r);
  return rc;
}
