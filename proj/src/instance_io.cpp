#include <fstream>
#include <sstream>

#include "adjrobust/errors.hpp"
#include "adjrobust/instance.hpp"
#include "json.hpp"

namespace adjrobust {

namespace {

using nlohmann::json;

json matrix_json(const Matrix& m) {
  json out = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(json(Vector(m.row(i).begin(), m.row(i).end())));
  return out;
}

const json& field(const json& obj, const char* name, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  auto it = obj.find(name);
  if (it == obj.end()) throw ParseError(where + ": missing field \"" + name + "\"");
  return *it;
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError(where + ": expected a number");
  return v.get<double>();
}

std::size_t count(const json& v, const std::string& where) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    throw ParseError(where + ": expected a nonnegative integer");
  return v.get<std::size_t>();
}

Vector vector_of(const json& v, const std::string& where) {
  if (!v.is_array()) throw ParseError(where + ": expected an array");
  Vector out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

// cols is the width to use for an empty matrix.
Matrix matrix_of(const json& v, const std::string& where, std::size_t cols) {
  if (!v.is_array()) throw ParseError(where + ": expected an array of rows");
  std::vector<Vector> rows;
  for (std::size_t i = 0; i < v.size(); ++i) {
    rows.push_back(vector_of(v[i], where + "[" + std::to_string(i) + "]"));
    if (rows.back().size() != rows.front().size()) throw ParseError(where + ": rows differ in length");
  }
  if (rows.empty()) return Matrix(0, cols);
  return Matrix::from_rows(rows);
}

}  // namespace

std::string instance_to_json(const Instance& inst) {
  json doc;
  doc["m"] = inst.m;
  doc["n"] = inst.n;
  doc["d_bar"] = inst.d_bar;
  doc["c"] = inst.c;
  doc["A"] = matrix_json(inst.A);
  doc["B"] = matrix_json(inst.B);
  json u;
  if (inst.uncertainty.is_hrep()) {
    u["type"] = "hrep";
    u["R"] = matrix_json(inst.uncertainty.h().R);
    u["r"] = inst.uncertainty.h().r;
  } else {
    u["type"] = "vrep";
    u["vertices"] = inst.uncertainty.v().vertices;
  }
  doc["uncertainty"] = std::move(u);
  doc["seed"] = inst.seed ? json(*inst.seed) : json(nullptr);
  return doc.dump(2) + "\n";
}

Instance instance_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // e.what() carries "at line L, column C".
    throw ParseError(std::string("malformed instance document: ") + e.what());
  }
  const std::string root = "instance";
  Instance inst;
  inst.m = count(field(doc, "m", root), "m");
  inst.n = count(field(doc, "n", root), "n");
  inst.d_bar = number(field(doc, "d_bar", root), "d_bar");
  inst.c = vector_of(field(doc, "c", root), "c");
  inst.A = matrix_of(field(doc, "A", root), "A", inst.n);
  inst.B = matrix_of(field(doc, "B", root), "B", inst.n);

  const json& u = field(doc, "uncertainty", root);
  const json& type = field(u, "type", "uncertainty");
  if (type == "hrep") {
    Vector r = vector_of(field(u, "r", "uncertainty"), "uncertainty.r");
    Matrix R = matrix_of(field(u, "R", "uncertainty"), "uncertainty.R", inst.m);
    inst.uncertainty = UncertaintySet::hrep(std::move(R), std::move(r));
  } else if (type == "vrep") {
    const json& vs = field(u, "vertices", "uncertainty");
    if (!vs.is_array()) throw ParseError("uncertainty.vertices: expected an array");
    std::vector<Vector> verts;
    for (std::size_t i = 0; i < vs.size(); ++i)
      verts.push_back(vector_of(vs[i], "uncertainty.vertices[" + std::to_string(i) + "]"));
    inst.uncertainty = UncertaintySet::vrep(std::move(verts));
  } else {
    throw ParseError("uncertainty.type: expected \"hrep\" or \"vrep\"");
  }

  const json& seed = field(doc, "seed", root);
  if (!seed.is_null()) {
    if (!seed.is_number_integer()) throw ParseError("seed: expected an integer or null");
    inst.seed = seed.is_number_unsigned() ? seed.get<std::uint64_t>()
                                          : static_cast<std::uint64_t>(seed.get<std::int64_t>());
  }
  inst.validate();
  return inst;
}

void write_instance(const Instance& inst, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << instance_to_json(inst);
  if (!out) throw Error("write failed: " + path.string());
}

Instance read_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return instance_from_json(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace adjrobust
