#include "genmean/json_io.hpp"

#include <cmath>
#include <fstream>
#include <string>

namespace genmean {

namespace {

const nlohmann::json& field(const nlohmann::json& doc, const char* name) {
  const auto it = doc.find(name);
  if (it == doc.end()) {
    fail(Errc::InvalidArgument,
         std::string("document is missing the \"") + name + "\" field");
  }
  return *it;
}

std::vector<double> real_array(const nlohmann::json& node, const char* name) {
  if (!node.is_array()) {
    fail(Errc::InvalidArgument,
         std::string("\"") + name + "\" must be an array of numbers");
  }
  std::vector<double> out;
  out.reserve(node.size());
  for (const auto& entry : node) {
    if (!entry.is_number()) {
      fail(Errc::InvalidArgument,
           std::string("\"") + name + "\" must contain only numbers");
    }
    out.push_back(entry.get<double>());
  }
  return out;
}

int int_field(const nlohmann::json& doc, const char* name) {
  const nlohmann::json& node = field(doc, name);
  if (!node.is_number_integer()) {
    fail(Errc::InvalidArgument,
         std::string("\"") + name + "\" must be an integer");
  }
  return node.get<int>();
}

// "r" serializes as a number for finite exponents and as "inf" otherwise.
ordered_json exponent_to_json(double exponent) {
  if (std::isinf(exponent)) {
    return ordered_json("inf");
  }
  return ordered_json(exponent);
}

ordered_json stats_to_json(
    const std::vector<std::pair<std::string, double>>& stats) {
  ordered_json doc = ordered_json::object();
  for (const auto& [key, value] : stats) {
    doc[key] = value;
  }
  return doc;
}

}  // namespace

ordered_json space_to_json(const MeasureSpace& space) {
  ordered_json doc;
  doc["atoms"] = space.labels();
  doc["weights"] = space.weights();
  return doc;
}

MeasureSpacePtr space_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) {
    fail(Errc::InvalidArgument, "space document must be an object");
  }
  const nlohmann::json& atoms = field(doc, "atoms");
  if (!atoms.is_array()) {
    fail(Errc::InvalidArgument, "\"atoms\" must be an array of labels");
  }
  std::vector<std::string> labels;
  labels.reserve(atoms.size());
  for (const auto& atom : atoms) {
    if (!atom.is_string()) {
      fail(Errc::InvalidArgument, "\"atoms\" must contain only strings");
    }
    labels.push_back(atom.get<std::string>());
  }
  return make_space(std::move(labels),
                    real_array(field(doc, "weights"), "weights"));
}

ordered_json function_to_json(const GridFunction& f) {
  ordered_json doc;
  doc["space"] = space_to_json(f.space());
  doc["arity"] = f.arity();
  doc["values"] = f.values();
  return doc;
}

GridFunction function_from_json(const nlohmann::json& doc,
                                const std::filesystem::path& base_dir) {
  if (!doc.is_object()) {
    fail(Errc::InvalidArgument, "function document must be an object");
  }
  const nlohmann::json& space_node = field(doc, "space");
  MeasureSpacePtr space;
  if (space_node.is_string()) {
    std::filesystem::path ref(space_node.get<std::string>());
    if (ref.is_relative()) {
      ref = base_dir / ref;
    }
    space = load_space(ref);
  } else {
    space = space_from_json(space_node);
  }
  const int arity = int_field(doc, "arity");
  return GridFunction(std::move(space), arity,
                      real_array(field(doc, "values"), "values"));
}

ordered_json density_to_json(const SymmetricDensity& density) {
  ordered_json doc = function_to_json(density.grid());
  doc["normalized"] = density.normalized();
  return doc;
}

SymmetricDensity density_from_json(const nlohmann::json& doc,
                                   const std::filesystem::path& base_dir) {
  GridFunction grid = function_from_json(doc, base_dir);
  const nlohmann::json& flag = field(doc, "normalized");
  if (!flag.is_boolean()) {
    fail(Errc::InvalidArgument, "\"normalized\" must be a boolean");
  }
  return SymmetricDensity(std::move(grid), flag.get<bool>());
}

ordered_json report_to_json(const Cond27Report& report) {
  ordered_json doc;
  doc["gamma"] = report.gamma;
  doc["B"] = report.b_atoms;
  doc["holds"] = report.holds;
  doc["epsilon"] = report.epsilon;
  doc["alpha"] = report.alpha;
  doc["beta"] = report.beta;
  return doc;
}

ordered_json trace_to_json(const ConvergenceTrace& trace) {
  ordered_json doc;
  doc["meta"] = stats_to_json(trace.meta);
  doc["steps"] = trace.steps;
  ordered_json rows = ordered_json::array();
  for (const auto& stats : trace.per_step) {
    rows.push_back(stats_to_json(stats));
  }
  doc["per_step"] = std::move(rows);
  return doc;
}

ordered_json bound_table_to_json(const BoundTable& table) {
  ordered_json doc;
  doc["order"] = table.order;
  doc["n_slots"] = table.n_slots;
  doc["r"] = exponent_to_json(table.exponent);
  doc["alpha"] = table.alpha;
  doc["beta"] = table.beta;
  ordered_json c_inf = ordered_json::array();
  for (const auto& [key, value] : table.c_inf) {
    c_inf.push_back({{"m", key.first}, {"n", key.second}, {"value", value}});
  }
  doc["c_inf"] = std::move(c_inf);
  ordered_json c_r = ordered_json::array();
  for (const auto& [key, value] : table.c_r) {
    c_r.push_back({{"m", key.first}, {"n", key.second}, {"value", value}});
  }
  doc["c_r"] = std::move(c_r);
  return doc;
}

ordered_json bound_check_to_json(const BoundCheckReport& report) {
  ordered_json doc;
  doc["order"] = report.order;
  doc["n_slots"] = report.n_slots;
  doc["r"] = exponent_to_json(report.exponent);
  doc["kernel_norm"] = report.kernel_norm;
  doc["mean_norm"] = report.mean_norm;
  doc["recovered_norm"] = report.recovered_norm;
  doc["constant"] = report.constant;
  doc["forward_margin"] = report.forward_margin;
  doc["inverse_margin"] = report.inverse_margin;
  doc["roundtrip_residual"] = report.roundtrip_residual;
  doc["forward_ok"] = report.forward_ok;
  doc["inverse_ok"] = report.inverse_ok;
  doc["roundtrip_ok"] = report.roundtrip_ok;
  doc["ok"] = report.ok();
  return doc;
}

nlohmann::json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    fail(Errc::InvalidArgument, "cannot open " + path.string());
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::InvalidArgument,
         "malformed JSON in " + path.string() + ": " + e.what());
  }
  return doc;
}

void save_json_file(const ordered_json& doc,
                    const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    fail(Errc::InvalidArgument, "cannot write " + path.string());
  }
  out << doc.dump(2) << '\n';
  if (!out) {
    fail(Errc::InvalidArgument, "failed writing " + path.string());
  }
}

MeasureSpacePtr load_space(const std::filesystem::path& path) {
  return space_from_json(load_json_file(path));
}

GridFunction load_function(const std::filesystem::path& path) {
  return function_from_json(load_json_file(path), path.parent_path());
}

SymmetricDensity load_density(const std::filesystem::path& path) {
  return density_from_json(load_json_file(path), path.parent_path());
}

}  // namespace genmean
