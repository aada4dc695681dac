#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "plurirank/currents.hpp"

namespace plurirank {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kCurrentSchema = "plurirank-current/1";

Json complex_to_json(const Complex& c) { return Json::array({c.real(), c.imag()}); }

Complex complex_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ValidationError(where + ": complex numbers must be [re, im] pairs");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

VectorXcd vector_from_json(const Json& j, int expected, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != expected)
    throw ValidationError(where + ": expected a complex vector of length " +
                          std::to_string(expected));
  VectorXcd v(expected);
  for (int i = 0; i < expected; ++i) v(i) = complex_from_json(j[static_cast<std::size_t>(i)], where);
  return v;
}

}  // namespace

std::string serialize_current(const DiscreteCurrent& current) {
  if (current.empty()) throw ValidationError("current has no atoms (positive mass required)");
  Json root;
  root["schema"] = kCurrentSchema;
  root["k"] = current.k;
  root["p"] = current.p;
  Json atoms = Json::array();
  for (const auto& atom : current.atoms) {
    Json ja;
    Json z = Json::array();
    for (Eigen::Index i = 0; i < atom.x.z().size(); ++i) z.push_back(complex_to_json(atom.x.z()(i)));
    ja["z"] = std::move(z);
    ja["weight"] = atom.weight;
    Json terms = Json::array();
    for (const auto& term : atom.t.terms()) {
      Json jt;
      jt["lambda"] = term.lambda;
      Json frame = Json::array();
      for (Eigen::Index c = 0; c < term.frame.cols(); ++c) {
        Json col = Json::array();
        for (Eigen::Index r = 0; r < term.frame.rows(); ++r)
          col.push_back(complex_to_json(term.frame(r, c)));
        frame.push_back(std::move(col));
      }
      jt["frame"] = std::move(frame);
      terms.push_back(std::move(jt));
    }
    ja["terms"] = std::move(terms);
    atoms.push_back(std::move(ja));
  }
  root["atoms"] = std::move(atoms);
  return root.dump(2) + "\n";
}

DiscreteCurrent parse_current(const std::string& json_text) {
  Json root;
  try {
    root = Json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("dataset is not valid JSON: ") + e.what());
  }
  if (!root.is_object() || !root.contains("schema") || root["schema"] != kCurrentSchema)
    throw ValidationError("dataset schema must be \"" + std::string(kCurrentSchema) + "\"");
  if (!root.contains("k") || !root["k"].is_number_integer() || !root.contains("p") ||
      !root["p"].is_number_integer())
    throw ValidationError("dataset must carry integer fields k and p");
  const int k = root["k"].get<int>();
  const int p = root["p"].get<int>();
  if (k < 1 || k > kMaxDim - 1 || p < 0 || p > k)
    throw ValidationError("dataset (k, p) out of the supported range");
  if (!root.contains("atoms") || !root["atoms"].is_array())
    throw ValidationError("dataset must carry an atoms array");
  const auto& atoms = root["atoms"];
  if (atoms.empty()) throw ValidationError("dataset has no atoms (positive mass required)");

  DiscreteCurrent current{k, p, {}};
  current.atoms.reserve(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const std::string where = "atom " + std::to_string(i);
    const auto& ja = atoms[i];
    if (!ja.is_object() || !ja.contains("z") || !ja.contains("weight") || !ja.contains("terms"))
      throw ValidationError(where + ": atoms need fields z, weight, terms");
    VectorXcd z = vector_from_json(ja["z"], k + 1, where + " point");
    if (!ja["weight"].is_number()) throw ValidationError(where + ": weight must be a number");
    const double weight = ja["weight"].get<double>();
    if (!ja["terms"].is_array()) throw ValidationError(where + ": terms must be an array");
    std::vector<SPTerm> terms;
    terms.reserve(ja["terms"].size());
    for (std::size_t ti = 0; ti < ja["terms"].size(); ++ti) {
      const auto& jt = ja["terms"][ti];
      if (!jt.is_object() || !jt.contains("lambda") || !jt.contains("frame") ||
          !jt["lambda"].is_number() || !jt["frame"].is_array())
        throw ValidationError(where + ": terms need numeric lambda and a frame array");
      if (static_cast<int>(jt["frame"].size()) != p)
        throw ValidationError(where + ": frames must have exactly p vectors");
      MatrixXcd frame(k + 1, p);
      for (int c = 0; c < p; ++c)
        frame.col(c) = vector_from_json(jt["frame"][static_cast<std::size_t>(c)], k + 1,
                                        where + " frame vector");
      terms.push_back(SPTerm{jt["lambda"].get<double>(), std::move(frame)});
    }
    try {
      ProjPoint x = ProjPoint::from_unit(std::move(z));
      SPVector t = SPVector::from_terms(k + 1, p, std::move(terms));
      current.atoms.push_back(make_atom(std::move(x), weight, std::move(t)));
    } catch (const DomainError& e) {
      throw ValidationError(where + ": " + e.what());
    }
  }
  return current;
}

DiscreteCurrent load_current(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open dataset file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_current(buf.str());
}

void save_current(const DiscreteCurrent& current, const std::string& path) {
  const std::string text = serialize_current(current);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write dataset file: " + tmp);
    out << text;
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace plurirank
