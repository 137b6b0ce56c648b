#pragma once

#include <string>
#include <vector>

namespace fmpo {

class FiniteGroup {
 public:
  FiniteGroup() = default;
  // table[a][b] = index of a*b. Associativity, identity and inverses are
  // checked; InputError otherwise.
  FiniteGroup(std::vector<std::vector<int>> table, std::vector<std::string> names = {},
              std::string label = "");

  static FiniteGroup builtin(const std::string& name);
  static std::vector<std::string> builtin_names();

  int order() const { return n_; }
  int mul(int a, int b) const { return table_[static_cast<std::size_t>(a) * n_ + b]; }
  int inv(int a) const { return inverse_[a]; }
  int identity() const { return identity_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& label() const { return label_; }
  std::vector<std::vector<int>> table() const;

  friend bool operator==(const FiniteGroup& a, const FiniteGroup& b) { return a.table_ == b.table_; }

 private:
  int n_ = 1;
  int identity_ = 0;
  std::vector<int> table_{0};
  std::vector<int> inverse_{0};
  std::vector<std::string> names_{"e"};
  std::string label_ = "Z1";
};

}  // namespace fmpo
