#include "fmpo/tensor_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

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

GradedSpace space_of(const json& j) {
  if (!j.is_object() || !j.contains("even") || !j.contains("odd"))
    throw InputError("space must be an object {even, odd}");
  return GradedSpace(j.at("even").get<int>(), j.at("odd").get<int>());
}

json space_json(const GradedSpace& s) { return {{"even", s.even_dim()}, {"odd", s.odd_dim()}}; }

complex number_of(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw InputError("coefficient must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<complex> coefficients_of(const json& j, std::size_t expected) {
  if (!j.is_array()) throw InputError("coefficients must be a list");
  if (j.size() != expected)
    throw InputError("expected " + std::to_string(expected) + " coefficients, got " + std::to_string(j.size()));
  std::vector<complex> out;
  out.reserve(expected);
  for (const auto& v : j) out.push_back(number_of(v));
  return out;
}

json coefficients_json(const std::vector<complex>& v) {
  json out = json::array();
  for (const complex& c : v) out.push_back({c.real(), c.imag()});
  return out;
}

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw InputError(std::string("invalid field: ") + e.what());
  }
}

}  // namespace

GradedTensor parse_tensor(const std::string& text) {
  return guarded([&] {
    const json j = parse_json(text);
    std::vector<GradedSpace> legs;
    for (const auto& l : j.at("legs")) legs.push_back(space_of(l));
    std::size_t n = 1;
    for (const auto& l : legs) n *= static_cast<std::size_t>(l.dim());
    const int parity = j.value("parity", 0);
    if (parity != 0 && parity != 1) throw InputError("parity must be 0 or 1");
    return GradedTensor(legs, parity, coefficients_of(j.at("coefficients"), n));
  });
}

std::string dump_tensor(const GradedTensor& t) {
  json j;
  j["legs"] = json::array();
  for (const auto& l : t.legs()) j["legs"].push_back(space_json(l));
  j["parity"] = t.parity();
  j["coefficients"] = coefficients_json(t.coefficients());
  return j.dump(1);
}

Fmpo parse_fmpo(const std::string& text) {
  return guarded([&] {
    const json j = parse_json(text);
    const GradedSpace v = space_of(j.at("virtual"));
    const GradedSpace p = space_of(j.at("physical"));
    const std::size_t n = static_cast<std::size_t>(v.dim()) * p.dim() * p.dim() * v.dim();
    FmpoSiteTensor site(GradedTensor({v, p, p, v}, 0, coefficients_of(j.at("coefficients"), n)));
    const json& c = j.at("closure");
    if (c.is_string()) {
      if (c.get<std::string>() != "supertrace") throw InputError("closure must be \"supertrace\" or {boundary}");
      return Fmpo::with_supertrace(std::move(site));
    }
    const json& m = c.at("boundary");
    if (!m.is_array() || static_cast<int>(m.size()) != v.dim()) throw InputError("boundary matrix has wrong shape");
    std::vector<complex> flat;
    for (const auto& row : m) {
      if (!row.is_array() || static_cast<int>(row.size()) != v.dim()) throw InputError("boundary matrix has wrong shape");
      for (const auto& x : row) flat.push_back(number_of(x));
    }
    bool even = false, odd = false;
    for (int r = 0; r < v.dim(); ++r)
      for (int s = 0; s < v.dim(); ++s)
        if (flat[static_cast<std::size_t>(r) * v.dim() + s] != complex{})
          (v.parity(r) == v.parity(s) ? even : odd) = true;
    if (even && odd) throw InputError("boundary matrix is not homogeneous");
    if (!even && !odd) throw InputError("boundary matrix is zero");
    return Fmpo::with_boundary(std::move(site), GradedTensor({v, v}, odd ? 1 : 0, flat));
  });
}

std::string dump_fmpo(const Fmpo& m) {
  json j;
  j["virtual"] = space_json(m.site.virtual_space());
  j["physical"] = space_json(m.site.physical_space());
  if (m.closure == Closure::Supertrace) {
    j["closure"] = "supertrace";
  } else {
    const Mat d = m.boundary_matrix();
    json rows = json::array();
    for (Eigen::Index r = 0; r < d.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index s = 0; s < d.cols(); ++s) row.push_back({d(r, s).real(), d(r, s).imag()});
      rows.push_back(row);
    }
    j["closure"] = {{"boundary", rows}};
  }
  j["coefficients"] = coefficients_json(m.site.tensor().coefficients());
  return j.dump(1);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << text << '\n';
}

}  // namespace fmpo
