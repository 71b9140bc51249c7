#pragma once

#include <array>
#include <optional>
#include <string>

#include <json.hpp>

#include "bbs/core.hpp"
#include "bbs/line.hpp"
#include "bbs/measures.hpp"
#include "bbs/slots.hpp"
#include "bbs/stats.hpp"

namespace bbs::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

json to_json(const BallConfig& config);
BallConfig config_from_json(const json& j);

json to_json(const Soliton& soliton);

/// {"v":1,"M":3,"rows":[[x_1...],[x_2...],[x_3...]]}
json to_json(const SlotDiagram& diagram);
SlotDiagram diagram_from_json(const json& j);

/// {"v":1,"rows":{"1":{"offset":o,"values":[...]}, ...}}
json to_json(const ComponentArray& components);
ComponentArray components_from_json(const json& j);

json to_json(const AnchoredConfig& anchored);
AnchoredConfig anchored_from_json(const json& j);

json to_json(const GofReport& report);
json to_json(const TInvarianceReport& report);
json to_json(const ShiftReport& report);

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// Measure family as given on the command line or in a parameter file.
struct MeasureSpec {
  std::string family;  // "bernoulli", "markov" or "explicit"
  std::optional<double> lambda;
  std::optional<Matrix2> Q;
  AlphaParams alpha;
};

MeasureSpec bernoulli_spec(double lambda);
MeasureSpec markov_spec(const Matrix2& Q);
MeasureSpec explicit_spec(std::vector<double> alpha);

/// {"family":"bernoulli","lambda":0.25} | {"family":"markov","Q":[[..],[..]]} | {"family":"explicit","alpha":[..]}
MeasureSpec measure_from_json(const json& j);
json to_json(const MeasureSpec& spec);

/// Parses "0.8,0.2;0.6,0.4" or a JSON array [[0.8,0.2],[0.6,0.4]].
Matrix2 parse_matrix(const std::string& text);
/// Parses "0.2,0.1" or a JSON array.
std::vector<double> parse_vector(const std::string& text);

}  // namespace bbs::io
