#include "fmpo/fmpo.h"

#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>

#include "fmpo/category_io.hpp"
#include "fmpo/commands.hpp"
#include "fmpo/stringnet.hpp"
#include "fmpo/tensor_io.hpp"

struct fmpo_tensor {
  fmpo::GradedTensor t;
};
struct fmpo_mpo {
  fmpo::Fmpo m;
};
struct fmpo_category {
  fmpo::FusionCategoryData d;
};
struct fmpo_report {
  fmpo::RunReport r;
  std::string json, text;
};

namespace {

thread_local std::string last_error;

template <class F>
fmpo_status guard(F&& f) {
  try {
    f();
    last_error.clear();
    return FMPO_OK;
  } catch (const fmpo::InputError& e) {
    last_error = e.what();
    return FMPO_ERR_INPUT;
  } catch (const fmpo::ConsistencyError& e) {
    last_error = e.what();
    return FMPO_ERR_CONSISTENCY;
  } catch (const std::exception& e) {
    last_error = e.what();
    return FMPO_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return FMPO_ERR_INTERNAL;
  }
}

fmpo_status null_error() {
  last_error = "null argument";
  return FMPO_ERR_NULL;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

fmpo::GlobalOptions options(const fmpo_options* o) {
  fmpo::GlobalOptions g;
  if (o) {
    g.tolerance = o->tolerance;
    g.seed = o->seed;
    g.max_dense_dim = o->max_dense_dim;
    g.phase_modulus_factor = o->phase_modulus_factor;
  }
  return g;
}

std::string str(const char* s) { return s ? s : ""; }

fmpo_report* wrap(fmpo::RunReport r) {
  auto* out = new fmpo_report{std::move(r), {}, {}};
  out->json = out->r.to_json();
  out->text = out->r.to_text();
  return out;
}

template <class F>
fmpo_report* command(F&& f) {
  try {
    return wrap(f());
  } catch (const std::exception& e) {
    fmpo::RunReport r;
    r.command = "unknown";
    r.error = e.what();
    r.finish();
    return wrap(std::move(r));
  }
}

std::vector<std::string> strings(const char* const* v, int n) {
  std::vector<std::string> out;
  for (int k = 0; k < n; ++k) out.push_back(str(v[k]));
  return out;
}

}  // namespace

extern "C" {

const char* fmpo_version(void) { return "1.0.0"; }
const char* fmpo_last_error(void) { return last_error.c_str(); }

fmpo_options fmpo_options_default(void) {
  const fmpo::GlobalOptions g;
  return fmpo_options{g.tolerance, g.seed, g.max_dense_dim, g.phase_modulus_factor};
}

void fmpo_string_free(char* s) { std::free(s); }

fmpo_status fmpo_tensor_from_json(const char* json, fmpo_tensor** out) {
  if (!json || !out) return null_error();
  return guard([&] { *out = new fmpo_tensor{fmpo::parse_tensor(json)}; });
}

fmpo_status fmpo_tensor_to_json(const fmpo_tensor* t, char** out) {
  if (!t || !out) return null_error();
  return guard([&] { *out = copy_string(fmpo::dump_tensor(t->t)); });
}

void fmpo_tensor_free(fmpo_tensor* t) { delete t; }

fmpo_status fmpo_tensor_rank(const fmpo_tensor* t, int* rank) {
  if (!t || !rank) return null_error();
  *rank = t->t.rank();
  return FMPO_OK;
}

fmpo_status fmpo_tensor_parity(const fmpo_tensor* t, int* parity) {
  if (!t || !parity) return null_error();
  *parity = t->t.parity();
  return FMPO_OK;
}

fmpo_status fmpo_tensor_permute(const fmpo_tensor* t, const int* perm, int n, fmpo_tensor** out) {
  if (!t || !out || (n > 0 && !perm)) return null_error();
  return guard([&] { *out = new fmpo_tensor{fmpo::permute_legs(t->t, std::span<const int>(perm, n))}; });
}

fmpo_status fmpo_tensor_contract(const fmpo_tensor* a, const fmpo_tensor* b, const int* pairs, int npairs,
                                 fmpo_tensor** out) {
  if (!a || !b || !out || (npairs > 0 && !pairs)) return null_error();
  return guard([&] {
    if (npairs < 0) throw fmpo::InputError("negative pair count");
    std::vector<std::pair<int, int>> p;
    for (int k = 0; k < npairs; ++k) p.emplace_back(pairs[2 * k], pairs[2 * k + 1]);
    *out = new fmpo_tensor{fmpo::contract(a->t, b->t, p)};
  });
}

fmpo_status fmpo_tensor_max_abs_diff(const fmpo_tensor* a, const fmpo_tensor* b, double* out) {
  if (!a || !b || !out) return null_error();
  return guard([&] { *out = fmpo::max_abs_diff(a->t, b->t); });
}

fmpo_status fmpo_mpo_from_json(const char* json, fmpo_mpo** out) {
  if (!json || !out) return null_error();
  return guard([&] { *out = new fmpo_mpo{fmpo::parse_fmpo(json)}; });
}

fmpo_status fmpo_mpo_to_json(const fmpo_mpo* m, char** out) {
  if (!m || !out) return null_error();
  return guard([&] { *out = copy_string(fmpo::dump_fmpo(m->m)); });
}

void fmpo_mpo_free(fmpo_mpo* m) { delete m; }

fmpo_status fmpo_mpo_multiply(const fmpo_mpo* a, const fmpo_mpo* b, fmpo_mpo** out) {
  if (!a || !b || !out) return null_error();
  return guard([&] {
    if (!(a->m.site.physical_space() == b->m.site.physical_space()))
      throw fmpo::InputError("physical spaces differ");
    *out = new fmpo_mpo{fmpo::multiply(a->m, b->m)};
  });
}

fmpo_status fmpo_mpo_bond_dim(const fmpo_mpo* m, int* out) {
  if (!m || !out) return null_error();
  *out = m->m.site.bond_dim();
  return FMPO_OK;
}

fmpo_status fmpo_mpo_close(const fmpo_mpo* m, int L, size_t max_dense_dim, size_t* dim, double* values) {
  if (!m || !dim) return null_error();
  return guard([&] {
    const fmpo::DenseOperator op = fmpo::close_to_operator(m->m, L, max_dense_dim);
    *dim = static_cast<size_t>(op.m.rows());
    if (!values) return;
    for (Eigen::Index r = 0; r < op.m.rows(); ++r)
      for (Eigen::Index c = 0; c < op.m.cols(); ++c) {
        const size_t k = 2 * (static_cast<size_t>(r) * op.m.cols() + c);
        values[k] = op.m(r, c).real();
        values[k + 1] = op.m(r, c).imag();
      }
  });
}

fmpo_status fmpo_mpo_block_types(const fmpo_mpo* m, uint64_t seed, int* nblocks, int* types, int capacity) {
  if (!m || !nblocks) return null_error();
  return guard([&] {
    fmpo::DecomposeOptions o;
    o.seed = seed;
    const auto blocks = fmpo::decompose_blocks(m->m, o);
    *nblocks = static_cast<int>(blocks.size());
    if (!types) return;
    for (int k = 0; k < *nblocks && k < capacity; ++k) types[k] = blocks[k].type == fmpo::AlgebraType::Odd ? 1 : 0;
  });
}

fmpo_status fmpo_category_from_json(const char* json, fmpo_category** out) {
  if (!json || !out) return null_error();
  return guard([&] {
    fmpo::FusionCategoryData d = fmpo::parse_category(json);
    const auto problems = fmpo::validate_table(d.table);
    if (!problems.empty()) throw fmpo::InputError("invalid F-symbol table: " + problems.front());
    *out = new fmpo_category{std::move(d)};
  });
}

void fmpo_category_free(fmpo_category* c) { delete c; }

fmpo_status fmpo_category_num_labels(const fmpo_category* c, int* out) {
  if (!c || !out) return null_error();
  *out = c->d.table.rules.num_labels;
  return FMPO_OK;
}

fmpo_status fmpo_category_pentagon_residual(const fmpo_category* c, double* out) {
  if (!c || !out) return null_error();
  return guard([&] { *out = fmpo::pentagon_residual(c->d.table); });
}

fmpo_status fmpo_category_stringnet_residuals(const fmpo_category* c, double out[3]) {
  if (!c || !out) return null_error();
  return guard([&] {
    out[0] = fmpo::verify_zipper_sn(c->d);
    out[1] = fmpo::verify_fmove(c->d);
    out[2] = fmpo::verify_pulling_through(c->d);
  });
}

fmpo_status fmpo_category_block(const fmpo_category* c, int label, fmpo_mpo** out) {
  if (!c || !out) return null_error();
  return guard([&] { *out = new fmpo_mpo{fmpo::Fmpo::with_supertrace(fmpo::build_fmpo_tensor(c->d, label))}; });
}

fmpo_report* fmpo_cmd_cohomology(const char* group, int degree, const char* coefficients, const fmpo_options* opt) {
  return command([&] { return fmpo::cmd_cohomology(str(group), degree, str(coefficients), options(opt)); });
}

fmpo_report* fmpo_cmd_spt_classify(const char* group, const fmpo_options* opt) {
  return command([&] { return fmpo::cmd_spt_classify(str(group), options(opt)); });
}

fmpo_report* fmpo_cmd_spt_stack(const char* label_a, const char* label_b, const char* out_path,
                                const fmpo_options* opt) {
  return command([&] { return fmpo::cmd_spt_stack(str(label_a), str(label_b), str(out_path), options(opt)); });
}

fmpo_report* fmpo_cmd_pentagon(const char* fsymbols, const fmpo_options* opt) {
  return command([&] { return fmpo::cmd_pentagon(str(fsymbols), options(opt)); });
}

fmpo_report* fmpo_cmd_stringnet_verify(const char* fsymbols, const char* checks, const fmpo_options* opt) {
  return command([&] {
    std::vector<std::string> list;
    std::stringstream ss(str(checks));
    for (std::string item; std::getline(ss, item, ',');)
      if (!item.empty()) list.push_back(item);
    return fmpo::cmd_stringnet_verify(str(fsymbols), list, options(opt));
  });
}

fmpo_report* fmpo_cmd_fmpo_multiply(const char* a, const char* b, const char* out_path, const fmpo_options* opt) {
  return command([&] { return fmpo::cmd_fmpo_multiply(str(a), str(b), str(out_path), options(opt)); });
}

fmpo_report* fmpo_cmd_fmpo_decompose(const char* path, const char* out_prefix, const fmpo_options* opt) {
  return command([&] { return fmpo::cmd_fmpo_decompose(str(path), str(out_prefix), options(opt)); });
}

fmpo_report* fmpo_cmd_fmpo_fuse(const char* a, const char* b, const char* const* library, int nlibrary,
                                const fmpo_options* opt) {
  return command([&] { return fmpo::cmd_fmpo_fuse(str(a), str(b), strings(library, nlibrary), options(opt)); });
}

fmpo_report* fmpo_cmd_fmpo_extract_f(const char* const* blocks, int nblocks, const char* out_path,
                                     const char* compare, const fmpo_options* opt) {
  return command([&] {
    return fmpo::cmd_fmpo_extract_f(strings(blocks, nblocks), str(out_path), str(compare), options(opt));
  });
}

fmpo_report* fmpo_cmd_fmpo_from_category(const char* fsymbols, const char* out_prefix, const fmpo_options* opt) {
  return command([&] { return fmpo::cmd_fmpo_from_category(str(fsymbols), str(out_prefix), options(opt)); });
}

int fmpo_report_exit_code(const fmpo_report* r) { return r ? r->r.exit_code : 2; }
int fmpo_report_pass(const fmpo_report* r) { return r && r->r.pass ? 1 : 0; }
const char* fmpo_report_json(const fmpo_report* r) { return r ? r->json.c_str() : ""; }
const char* fmpo_report_text(const fmpo_report* r) { return r ? r->text.c_str() : ""; }
void fmpo_report_free(fmpo_report* r) { delete r; }

}  // extern "C"
