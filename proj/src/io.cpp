#include "bbs/io.hpp"

#include <sstream>

#include "bbs/error.hpp"

namespace bbs::io {

namespace {

void check_version(const json& j) {
  if (!j.is_object()) throw InputError("expected a JSON object");
  if (j.contains("v") && j.at("v") != kSchemaVersion) {
    throw InputError("unsupported schema version " + j.at("v").dump());
  }
}

template <class T>
T get(const json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InputError(std::string("bad field \"") + key + "\": " + e.what());
  }
}

std::vector<Count> counts(const json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array");
  std::vector<Count> out;
  for (const auto& x : j) {
    if (!x.is_number_unsigned()) throw InputError(std::string(what) + " must hold nonnegative integers");
    out.push_back(x.get<Count>());
  }
  return out;
}

}  // namespace

json to_json(const BallConfig& config) { return {{"origin", config.origin()}, {"bits", config.str()}}; }

BallConfig config_from_json(const json& j) {
  if (j.is_string()) return BallConfig::parse(j.get<std::string>());
  check_version(j);
  return BallConfig::parse(get<std::string>(j, "bits"), j.contains("origin") ? get<Coord>(j, "origin") : 1);
}

json to_json(const Soliton& s) { return {{"k", s.size}, {"head", s.head}, {"tail", s.tail}}; }

json to_json(const SlotDiagram& diagram) {
  return {{"v", kSchemaVersion}, {"M", diagram.max_size()}, {"rows", diagram.rows()}};
}

SlotDiagram diagram_from_json(const json& j) {
  check_version(j);
  if (!j.contains("rows") || !j.at("rows").is_array()) throw InputError("\"rows\" must be an array of rows");
  std::vector<std::vector<Count>> rows;
  for (const auto& r : j.at("rows")) rows.push_back(counts(r, "each row"));
  if (j.contains("M") && get<int>(j, "M") != static_cast<int>(rows.size())) {
    throw InputError("\"M\" does not match the number of rows");
  }
  if (auto why = SlotDiagram::check(rows)) throw InputError("invalid slot diagram: " + *why);
  return SlotDiagram(std::move(rows));
}

json to_json(const ComponentArray& components) {
  json rows = json::object();
  for (const auto& [k, row] : components.rows()) {
    rows[std::to_string(k)] = {{"offset", row.offset}, {"values", row.values}};
  }
  return {{"v", kSchemaVersion}, {"rows", rows}};
}

ComponentArray components_from_json(const json& j) {
  check_version(j);
  const json& rows = j.contains("rows") ? j.at("rows") : throw InputError("missing field \"rows\"");
  if (!rows.is_object()) throw InputError("\"rows\" must map sizes to rows");
  ComponentArray out;
  for (const auto& [key, value] : rows.items()) {
    int k = 0;
    try {
      std::size_t used = 0;
      k = std::stoi(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw InputError("row key \"" + key + "\" is not an integer");
    }
    if (k < 1) throw InputError("soliton sizes start at 1");
    if (!value.is_object() || !value.contains("values")) throw InputError("row " + key + " needs \"offset\" and \"values\"");
    out.set_row(k, {get<std::int64_t>(value, "offset"), counts(value.at("values"), "\"values\"")});
  }
  return out;
}

json to_json(const AnchoredConfig& a) {
  return {{"v", kSchemaVersion},
          {"origin", a.config.origin()},
          {"bits", a.config.str()},
          {"first_index", a.first_index},
          {"records", a.records}};
}

AnchoredConfig anchored_from_json(const json& j) {
  check_version(j);
  AnchoredConfig a;
  a.config = config_from_json(j);
  a.first_index = get<std::int64_t>(j, "first_index");
  a.records = get<std::vector<Coord>>(j, "records");
  if (a.records.empty()) throw InputError("\"records\" must not be empty");
  return a;
}

json to_json(const GofReport& r) {
  json bins = json::array();
  for (const auto& b : r.bins) bins.push_back({{"label", b.label}, {"observed", b.observed}, {"expected", b.expected}});
  return {{"statistic", r.statistic}, {"dof", r.dof}, {"p_value", r.p_value}, {"bins", bins}};
}

json to_json(const TInvarianceReport& r) {
  json blocks = json::array();
  for (const auto& b : r.blocks) {
    json e = {{"block", b.block}, {"before", b.before}, {"after", b.after}, {"se", b.se}, {"z", b.z}};
    if (b.exact) e["exact"] = *b.exact;
    if (b.z_exact) e["z_exact"] = *b.z_exact;
    blocks.push_back(e);
  }
  return {{"boxes", r.boxes}, {"steps", r.steps}, {"capped", r.capped}, {"max_abs_z", r.max_abs_z},
          {"blocks", blocks}};
}

json to_json(const ShiftReport& r) {
  json offsets = json::object();
  for (const auto& [k, d] : r.offsets) offsets[std::to_string(k)] = d;
  return {{"ok", r.ok()},
          {"rows_match", r.rows_match},
          {"counts_conserved", r.counts_conserved},
          {"offsets", offsets},
          {"mismatched", r.mismatched}};
}

MeasureSpec bernoulli_spec(double lambda) {
  MeasureSpec s;
  s.family = "bernoulli";
  s.lambda = lambda;
  s.alpha = bernoulli_alpha(lambda);
  return s;
}

MeasureSpec markov_spec(const Matrix2& Q) {
  MeasureSpec s;
  s.family = "markov";
  s.Q = Q;
  s.alpha = markov_alpha(Q);
  return s;
}

MeasureSpec explicit_spec(std::vector<double> alpha) {
  for (double a : alpha) {
    if (!(a >= 0.0 && a < 1.0)) throw InputError("each alpha_k must lie in [0, 1)");
  }
  MeasureSpec s;
  s.family = "explicit";
  s.alpha.values = std::move(alpha);
  return s;
}

MeasureSpec measure_from_json(const json& j) {
  check_version(j);
  const auto family = get<std::string>(j, "family");
  if (family == "bernoulli") return bernoulli_spec(get<double>(j, "lambda"));
  if (family == "markov") {
    const auto rows = get<std::vector<std::vector<double>>>(j, "Q");
    if (rows.size() != 2 || rows[0].size() != 2 || rows[1].size() != 2) throw InputError("Q must be 2x2");
    return markov_spec({{{rows[0][0], rows[0][1]}, {rows[1][0], rows[1][1]}}});
  }
  if (family == "explicit") return explicit_spec(get<std::vector<double>>(j, "alpha"));
  throw InputError("unknown measure family \"" + family + "\"");
}

json to_json(const MeasureSpec& s) {
  json j = {{"family", s.family}};
  if (s.lambda) j["lambda"] = *s.lambda;
  if (s.Q) j["Q"] = *s.Q;
  if (s.family == "explicit") j["alpha"] = s.alpha.values;
  return j;
}

std::vector<double> parse_vector(const std::string& text) {
  const auto first = text.find_first_not_of(" \t");
  if (first != std::string::npos && text[first] == '[') {
    try {
      return json::parse(text).get<std::vector<double>>();
    } catch (const json::exception& e) {
      throw InputError(std::string("bad vector: ") + e.what());
    }
  }
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("bad number \"" + item + "\"");
    }
  }
  return out;
}

Matrix2 parse_matrix(const std::string& text) {
  std::vector<double> flat;
  const auto first = text.find_first_not_of(" \t");
  if (first != std::string::npos && text[first] == '[') {
    try {
      for (const auto& row : json::parse(text).get<std::vector<std::vector<double>>>()) {
        if (row.size() != 2) throw InputError("Q must be 2x2");
        flat.insert(flat.end(), row.begin(), row.end());
      }
    } catch (const json::exception& e) {
      throw InputError(std::string("bad matrix: ") + e.what());
    }
  } else {
    std::string t = text;
    for (char& c : t) {
      if (c == ';') c = ',';
    }
    flat = parse_vector(t);
  }
  if (flat.size() != 4) throw InputError("Q must have four entries");
  return {{{flat[0], flat[1]}, {flat[2], flat[3]}}};
}

}  // namespace bbs::io
