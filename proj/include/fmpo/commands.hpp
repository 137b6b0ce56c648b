#pragma once

// Command implementations behind the CLI. Each returns a finished report;
// exit_code is 0 on pass, 1 on a failed check and 2 on bad input.

#include <cstdint>
#include <string>
#include <vector>

#include "fmpo/report.hpp"

namespace fmpo {

struct GlobalOptions {
  double tolerance = 1e-10;
  std::uint64_t seed = 2024;
  std::size_t max_dense_dim = 4096;
  int phase_modulus_factor = 2;
};

RunReport cmd_cohomology(const std::string& group, int degree, const std::string& coefficients,
                         const GlobalOptions& opt);
RunReport cmd_spt_classify(const std::string& group, const GlobalOptions& opt);
// Writes the stacked label to out_path when it is not empty.
RunReport cmd_spt_stack(const std::string& label_a, const std::string& label_b, const std::string& out_path,
                        const GlobalOptions& opt);
RunReport cmd_pentagon(const std::string& fsymbols, const GlobalOptions& opt);

// checks: any of "zipper", "fmove", "pullthrough", "unitarity", "grouplaw",
// "roundtrip"; empty means the first four.
RunReport cmd_stringnet_verify(const std::string& fsymbols, const std::vector<std::string>& checks,
                               const GlobalOptions& opt);

RunReport cmd_fmpo_multiply(const std::string& a, const std::string& b, const std::string& out_path,
                            const GlobalOptions& opt);
// Writes block i to <out_prefix>_<i>.json when out_prefix is not empty.
RunReport cmd_fmpo_decompose(const std::string& path, const std::string& out_prefix, const GlobalOptions& opt);
RunReport cmd_fmpo_fuse(const std::string& a, const std::string& b, const std::vector<std::string>& library,
                        const GlobalOptions& opt);
// blocks: supertrace-closed block files in label order. compare (optional)
// is an F-symbol file the extracted table must match up to gauge.
RunReport cmd_fmpo_extract_f(const std::vector<std::string>& blocks, const std::string& out_path,
                             const std::string& compare, const GlobalOptions& opt);
// Writes the string-net block of each label to <out_prefix>_<label index>.json.
RunReport cmd_fmpo_from_category(const std::string& fsymbols, const std::string& out_prefix,
                                 const GlobalOptions& opt);

}  // namespace fmpo
