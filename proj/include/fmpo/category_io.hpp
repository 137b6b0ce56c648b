#pragma once

// JSON files for fusion categories (F-symbols), finite groups and
// supercohomology labels.

#include <string>

#include "fmpo/fusion.hpp"
#include "fmpo/supercohomology.hpp"

namespace fmpo {

// {labels: [{name, parity}], fusion: [[a, b, c, N]], deg_parity: [[a, b, c, mu, p]],
//  F: [{key: [a,b,c,d,e,f,alpha,beta,mu,nu], value: [re, im]}], unitary: bool}
// Missing F entries are zero and missing degeneracy parities are even.
// Entries outside admissible channels are rejected.
FusionCategoryData parse_category(const std::string& text);
std::string dump_category(const FusionCategoryData& data);

// {order, table: n x n, names}
FiniteGroup parse_group(const std::string& text);
std::string dump_group(const FiniteGroup& g);
// A builtin name, or a path to a group file.
FiniteGroup resolve_group(const std::string& ref, const std::string& base_dir = ".");

// {group_ref, f: [bits over G], Z: n x n bits, alpha: {q, exponents over G^3}}
// group_ref is resolved relative to base_dir.
SptLabel parse_label(const std::string& text, const std::string& base_dir = ".");
std::string dump_label(const SptLabel& x, const std::string& group_ref);

}  // namespace fmpo
