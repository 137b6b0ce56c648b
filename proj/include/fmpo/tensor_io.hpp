#pragma once

// JSON interchange for graded tensors and fMPOs. Coefficients are lists of
// [re, im] pairs in row-major order over the legs, even sector first.

#include <string>

#include "fmpo/fmpo_algebra.hpp"

namespace fmpo {

GradedTensor parse_tensor(const std::string& text);
std::string dump_tensor(const GradedTensor& t);

// {virtual: {even, odd}, physical: {even, odd},
//  closure: "supertrace" | {"boundary": [[[re, im], ...], ...]},
//  coefficients: [...]} with legs (alpha, i, j, beta).
Fmpo parse_fmpo(const std::string& text);
std::string dump_fmpo(const Fmpo& m);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace fmpo
