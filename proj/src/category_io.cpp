#include "fmpo/category_io.hpp"

#include <filesystem>

#include <json.hpp>

#include "fmpo/tensor_io.hpp"

namespace fmpo {

using nlohmann::json;

namespace {

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw InputError(std::string("invalid field: ") + e.what());
  }
}

int label_index(int v, int n, const char* what) {
  if (v < 0 || v >= n) throw InputError(std::string(what) + " label out of range");
  return v;
}

int bit(const json& j) {
  const int v = j.get<int>();
  if (v != 0 && v != 1) throw InputError("expected a bit (0 or 1)");
  return v;
}

}  // namespace

FusionCategoryData parse_category(const std::string& text) {
  return guarded([&] {
    const json j = parse_json(text);
    FusionCategoryData d;
    for (const auto& l : j.at("labels")) {
      d.names.push_back(l.at("name").get<std::string>());
      d.label_parity.push_back(bit(l.value("parity", json(0))));
    }
    const int n = static_cast<int>(d.names.size());
    if (n == 0) throw InputError("category has no labels");
    FusionRules& r = d.table.rules;
    r.num_labels = n;
    for (const auto& e : j.at("fusion")) {
      if (e.size() != 4) throw InputError("fusion entries are [a, b, c, N]");
      const int a = label_index(e[0].get<int>(), n, "fusion"), b = label_index(e[1].get<int>(), n, "fusion"),
                c = label_index(e[2].get<int>(), n, "fusion"), m = e[3].get<int>();
      if (m < 0) throw InputError("negative fusion multiplicity");
      if (r.N.count({a, b, c})) throw InputError("duplicate fusion entry");
      if (m > 0) r.N[{a, b, c}] = m;
    }
    for (const auto& [k, m] : r.N)
      for (int mu = 0; mu < m; ++mu) r.deg_parity[{k[0], k[1], k[2], mu}] = 0;
    if (j.contains("deg_parity"))
      for (const auto& e : j.at("deg_parity")) {
        if (e.size() != 5) throw InputError("deg_parity entries are [a, b, c, mu, parity]");
        const std::array<int, 4> k{e[0].get<int>(), e[1].get<int>(), e[2].get<int>(), e[3].get<int>()};
        if (!r.deg_parity.count(k)) throw InputError("deg_parity entry on a forbidden channel");
        r.deg_parity[k] = bit(e[4]);
      }
    for (const auto& e : j.at("F")) {
      const auto key = e.at("key").get<std::vector<int>>();
      if (key.size() != 10) throw InputError("F keys have 10 entries");
      FKey k;
      std::copy(key.begin(), key.end(), k.begin());
      const json& v = e.at("value");
      const complex val = v.is_number() ? complex(v.get<double>(), 0.0)
                                        : complex(v.at(0).get<double>(), v.at(1).get<double>());
      auto ok = [&](int a, int b, int c, int mu) {
        return a >= 0 && a < n && b >= 0 && b < n && c >= 0 && c < n && mu >= 0 && mu < r.mult(a, b, c);
      };
      if (!ok(k[0], k[1], k[4], k[6]) || !ok(k[4], k[2], k[3], k[7]) || !ok(k[1], k[2], k[5], k[8]) ||
          !ok(k[0], k[5], k[3], k[9])) {
        if (val != complex{}) throw InputError("nonzero F entry on a forbidden fusion channel");
        continue;
      }
      if (d.table.F.count(k)) throw InputError("duplicate F entry");
      d.table.F[k] = val;
    }
    d.unitary = j.value("unitary", false);
    return d;
  });
}

std::string dump_category(const FusionCategoryData& d) {
  json j;
  j["labels"] = json::array();
  for (std::size_t a = 0; a < d.names.size(); ++a)
    j["labels"].push_back({{"name", d.names[a]}, {"parity", a < d.label_parity.size() ? d.label_parity[a] : 0}});
  j["fusion"] = json::array();
  for (const auto& [k, m] : d.table.rules.N) j["fusion"].push_back({k[0], k[1], k[2], m});
  j["deg_parity"] = json::array();
  for (const auto& [k, p] : d.table.rules.deg_parity) j["deg_parity"].push_back({k[0], k[1], k[2], k[3], p});
  j["F"] = json::array();
  for (const auto& [k, v] : d.table.F)
    j["F"].push_back({{"key", std::vector<int>(k.begin(), k.end())}, {"value", {v.real(), v.imag()}}});
  j["unitary"] = d.unitary;
  return j.dump(1);
}

FiniteGroup parse_group(const std::string& text) {
  return guarded([&] {
    const json j = parse_json(text);
    auto table = j.at("table").get<std::vector<std::vector<int>>>();
    if (j.contains("order") && j.at("order").get<std::size_t>() != table.size())
      throw InputError("group order does not match the table");
    std::vector<std::string> names;
    if (j.contains("names")) names = j.at("names").get<std::vector<std::string>>();
    return FiniteGroup(std::move(table), std::move(names), j.value("label", std::string{}));
  });
}

std::string dump_group(const FiniteGroup& g) {
  json j;
  j["order"] = g.order();
  j["table"] = g.table();
  j["names"] = g.names();
  j["label"] = g.label();
  return j.dump(1);
}

FiniteGroup resolve_group(const std::string& ref, const std::string& base_dir) {
  for (const auto& b : FiniteGroup::builtin_names())
    if (b == ref) return FiniteGroup::builtin(ref);
  std::filesystem::path p(ref);
  if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
  if (!std::filesystem::exists(p)) throw InputError("unknown group '" + ref + "'");
  return parse_group(read_file(p.string()));
}

SptLabel parse_label(const std::string& text, const std::string& base_dir) {
  return guarded([&] {
    const json j = parse_json(text);
    const FiniteGroup g = resolve_group(j.at("group_ref").get<std::string>(), base_dir);
    const std::size_t n = static_cast<std::size_t>(g.order());
    const json& al = j.at("alpha");
    const i64 q = al.at("q").get<i64>();
    if (q < 2 || q % 2) throw InputError("alpha modulus q must be even and at least 2");
    SptLabel x = SptLabel::trivial(g, q);
    if (j.contains("f")) {
      const json& f = j.at("f");
      if (f.size() != n) throw InputError("f must have one bit per group element");
      for (std::size_t a = 0; a < n; ++a) x.f[a] = bit(f[a]);
    }
    if (j.contains("Z")) {
      const json& Z = j.at("Z");
      if (Z.size() != n) throw InputError("Z must be an n x n bit matrix");
      for (std::size_t a = 0; a < n; ++a) {
        if (Z[a].size() != n) throw InputError("Z must be an n x n bit matrix");
        for (std::size_t b = 0; b < n; ++b) x.Z[a * n + b] = bit(Z[a][b]);
      }
    }
    const auto ex = al.at("exponents").get<std::vector<i64>>();
    if (ex.size() != n * n * n) throw InputError("alpha exponents must cover G^3");
    for (std::size_t k = 0; k < ex.size(); ++k) x.alpha[k] = ((ex[k] % q) + q) % q;
    return x;
  });
}

std::string dump_label(const SptLabel& x, const std::string& group_ref) {
  const std::size_t n = static_cast<std::size_t>(x.group.order());
  json j;
  j["group_ref"] = group_ref;
  j["f"] = x.f;
  json Z = json::array();
  for (std::size_t a = 0; a < n; ++a) Z.push_back(std::vector<i64>(x.Z.begin() + a * n, x.Z.begin() + (a + 1) * n));
  j["Z"] = Z;
  j["alpha"] = {{"q", x.q}, {"exponents", x.alpha}};
  return j.dump(1);
}

}  // namespace fmpo
