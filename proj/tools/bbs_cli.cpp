#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "bbs/core.hpp"
#include "bbs/error.hpp"
#include "bbs/io.hpp"
#include "bbs/line.hpp"
#include "bbs/measures.hpp"
#include "bbs/slots.hpp"
#include "bbs/stats.hpp"

using namespace bbs;
using io::json;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kUsage = 2, kInvalidInput = 3, kPrecondition = 4 };

struct VerificationFailed {};

// ---- shared option groups --------------------------------------------------

struct Output {
  std::string format = "text";
  std::string out;

  void add(CLI::App* app, const std::string& default_format = "text") {
    format = default_format;
    app->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    app->add_option("--out", out, "Write output to this file instead of stdout");
  }
  bool json_mode() const { return format == "json"; }
  void emit(const std::string& text) const {
    if (out.empty()) {
      std::cout << text;
      if (!text.empty() && text.back() != '\n') std::cout << '\n';
      return;
    }
    std::ofstream f(out);
    if (!f) throw InputError("cannot write " + out);
    f << text;
    if (!text.empty() && text.back() != '\n') f << '\n';
  }
  void emit(const json& j) const { emit(j.dump(2)); }
};

struct MeasureOptions {
  std::string family = "bernoulli";
  double lambda = 0.25;
  std::string Q;
  std::string alpha;

  void add(CLI::App* app) {
    app->add_option("--measure", family, "Measure family")
        ->check(CLI::IsMember({"bernoulli", "markov", "explicit"}))
        ->capture_default_str();
    app->add_option("--lambda", lambda, "Ball density of the product measure")->capture_default_str();
    app->add_option("--Q", Q, "Markov transition matrix, e.g. 0.8,0.2;0.6,0.4");
    app->add_option("--alpha", alpha, "Explicit soliton weights alpha_1,alpha_2,...");
  }
  io::MeasureSpec spec() const {
    if (family == "markov") {
      if (Q.empty()) throw InputError("--measure markov needs --Q");
      return io::markov_spec(io::parse_matrix(Q));
    }
    if (family == "explicit") {
      if (alpha.empty()) throw InputError("--measure explicit needs --alpha");
      return io::explicit_spec(io::parse_vector(alpha));
    }
    return io::bernoulli_spec(lambda);
  }
  // Walk-driven sources for the two stationary families, the slot-diagram sampler otherwise.
  ExcursionSource source(const io::MeasureSpec& s, const std::string& kind) const {
    if (kind == "nu" || s.family == "explicit") return nu_source(s.alpha);
    if (s.family == "markov") return markov_chain_source(*s.Q);
    return bernoulli_walk_source(*s.lambda);
  }
  BlockLaw block_law(const io::MeasureSpec& s) const {
    if (s.family == "markov") return markov_block_law(*s.Q);
    if (s.family == "bernoulli") return bernoulli_block_law(*s.lambda);
    return {};
  }
};

// ---- input ------------------------------------------------------------------

std::string slurp(const std::string& path) {
  if (path.empty() || path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream f(path);
  if (!f) throw InputError("cannot read " + path);
  return {std::istreambuf_iterator<char>(f), {}};
}

std::string trim(std::string s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
}

// A configuration given as a 0/1 string, as "-" (stdin) or as JSON ({"origin","bits"} or any sample output).
BallConfig read_config(const std::string& arg, Coord origin) {
  const std::string text = trim((arg.empty() || arg == "-") ? slurp("-") : arg);
  if (!text.empty() && text.front() == '{') {
    const auto j = parse_json(text);
    if (j.contains("config")) return io::config_from_json(j.at("config"));
    return io::config_from_json(j);
  }
  return BallConfig::parse(text, origin);
}

json read_json_input(const std::string& path) { return parse_json(slurp(path)); }

// Configuration with a record at the origin, as consumed by decompose.
BallConfig palm_config(const json& j) {
  if (j.contains("config")) return io::config_from_json(j.at("config"));
  return io::config_from_json(j);
}

// ---- evolve -------------------------------------------------------------------

struct EvolveCmd {
  std::string config;
  Coord origin = 1;
  int steps = 1;
  bool trace = false;
  Output output;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("evolve", "Apply the carrier sweep T");
    c->add_option("config", config, "0/1 string, JSON, or - for stdin");
    c->add_option("--origin", origin, "Coordinate of the first box")->capture_default_str();
    c->add_option("--steps", steps, "Number of sweeps")->check(CLI::NonNegativeNumber)->capture_default_str();
    c->add_flag("--trace", trace, "Also print the carrier load after each box");
    output.add(c);
    c->final_callback([this] { run(); });
  }

  void run() {
    const auto eta = read_config(config, origin);
    std::vector<BallConfig> history = {eta};
    for (int t = 0; t < steps; ++t) history.push_back(evolve(history.back()));
    Coord from = eta.origin(), to = eta.end();
    for (const auto& h : history) {
      if (h.has_balls()) {
        const auto tr = h.trimmed();
        from = std::min(from, tr.origin());
        to = std::max(to, tr.end());
      }
    }
    if (output.json_mode()) {
      json configs = json::array();
      for (const auto& h : history) configs.push_back(io::to_json(h.has_balls() ? h.trimmed() : h));
      json j = {{"v", io::kSchemaVersion}, {"steps", steps}, {"configs", configs}};
      if (trace) j["trace"] = carrier_trace(eta.rewindowed(from, to));
      output.emit(j);
      return;
    }
    std::string text;
    for (std::size_t t = 0; t < history.size(); ++t) {
      text += history[t].str(from, to) + "\n";
      if (trace && t + 1 < history.size()) {
        for (Count c : carrier_trace(history[t].rewindowed(from, to))) text += c < 10 ? char('0' + c) : '+';
        text += "\n";
      }
    }
    output.emit(text);
  }
};

// ---- decompose / reconstruct -------------------------------------------------

json decomposition_json(const BallConfig& eta) {
  const auto seq = excursions_from_config(eta);
  std::vector<Coord> recs;
  const auto anchored = config_from_excursions(seq, &recs);
  json excursions = json::array();
  for (std::size_t i = 0; i < seq.items.size(); ++i) {
    const auto& e = seq.items[i];
    const auto x = diagram_from_excursion(e);
    json slots = json::object();
    for (int k = 1; k <= std::max(1, x.max_size()); ++k) {
      auto pos = slot_positions(e, k);
      for (auto& p : pos) p += recs[i];
      slots[std::to_string(k)] = pos;
    }
    excursions.push_back({{"index", seq.first_index + static_cast<std::int64_t>(i)},
                          {"record", recs[i]},
                          {"bits", e.str()},
                          {"diagram", io::to_json(x)},
                          {"slots", slots}});
  }
  json solitons = json::array();
  for (const auto& s : ts_decompose(eta)) solitons.push_back(io::to_json(s));
  json counts = json::object();
  for (const auto& [k, n] : soliton_counts(eta)) counts[std::to_string(k)] = n;
  return {{"v", io::kSchemaVersion},
          {"config", io::to_json(eta)},
          {"records", recs},
          {"solitons", solitons},
          {"counts", counts},
          {"excursions", excursions},
          {"components", io::to_json(decompose(anchored))}};
}

struct DecomposeCmd {
  std::string config;
  Coord origin = 1;
  Output output;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("decompose", "Solitons, slots, slot diagrams and components of a configuration");
    c->add_option("config", config, "0/1 string, JSON, or - for stdin");
    c->add_option("--origin", origin, "Coordinate of the first box")->capture_default_str();
    output.add(c, "json");
    c->final_callback([this] { run(); });
  }

  void run() {
    const auto eta = read_config(config, origin);
    if (!records(eta).contains(0)) throw PreconditionError("box 0 must be a record (no balls at or left of the origin)");
    const auto j = decomposition_json(eta);
    if (output.json_mode()) {
      output.emit(j);
      return;
    }
    std::ostringstream os;
    os << "records:";
    for (Coord r : j.at("records")) os << ' ' << r;
    os << "\nsolitons:\n";
    for (const auto& s : ts_decompose(eta)) {
      os << "  k=" << s.size << " head";
      for (Coord z : s.head) os << ' ' << z;
      os << " tail";
      for (Coord z : s.tail) os << ' ' << z;
      os << '\n';
    }
    for (const auto& e : j.at("excursions")) {
      os << "excursion " << e.at("index").get<std::int64_t>() << " at record " << e.at("record").get<Coord>() << ": "
         << e.at("bits").get<std::string>() << '\n';
      const auto rows = e.at("diagram").at("rows");
      for (std::size_t k = rows.size(); k >= 1; --k) {
        os << "  x_" << k << " =";
        for (Count v : rows[k - 1]) os << ' ' << v;
        os << '\n';
      }
    }
    os << "components:\n";
    for (const auto& [k, row] : j.at("components").at("rows").items()) {
      os << "  zeta_" << k << " from " << row.at("offset").get<std::int64_t>() << ':';
      for (Count v : row.at("values")) os << ' ' << v;
      os << '\n';
    }
    output.emit(os.str());
  }
};

struct ReconstructCmd {
  std::string input = "-";
  Output output;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("reconstruct", "Configuration from components, a slot diagram or decompose output");
    c->add_option("input", input, "JSON file or - for stdin")->capture_default_str();
    output.add(c);
    c->final_callback([this] { run(); });
  }

  void run() {
    const auto j = read_json_input(input);
    if (!j.is_object()) throw InputError("expected a JSON object");
    BallConfig eta;
    std::optional<BallConfig> window;
    if (j.contains("components")) {
      eta = reconstruct(io::components_from_json(j.at("components")));
      if (j.contains("config")) window = io::config_from_json(j.at("config"));
    } else if (j.contains("rows") && j.at("rows").is_array()) {
      const auto e = excursion_from_diagram(io::diagram_from_json(j));
      eta = e.config();
      window = BallConfig(1, std::vector<Bit>(e.size(), 0));
    } else {
      eta = reconstruct(io::components_from_json(j));
    }
    // Restore the window of the decomposed input when it is known.
    if (window) {
      eta = eta.rewindowed(window->origin(), window->end());
    } else if (eta.has_balls()) {
      eta = eta.rewindowed(1, eta.trimmed().end());
    } else {
      eta = BallConfig();
    }
    if (output.json_mode()) {
      output.emit(io::to_json(eta));
    } else {
      output.emit(eta.str());
    }
  }
};

// ---- sample --------------------------------------------------------------------

struct SampleCmd {
  MeasureOptions measure;
  std::string mode = "palm";
  std::string source = "walk";
  std::size_t count = 1000;
  Coord boxes = 10000;
  std::uint64_t cap = 4096;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  Output output;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("sample", "Draw excursions, Palm or anti-Palm configurations");
    measure.add(c);
    c->add_option("--mode", mode, "What to sample")->check(CLI::IsMember({"palm", "anti-palm", "excursions"}))->capture_default_str();
    c->add_option("--source", source, "Excursion source: the walk/chain, or the slot-diagram sampler")
        ->check(CLI::IsMember({"walk", "nu"}))
        ->capture_default_str();
    c->add_option("--count", count, "Number of excursions (palm, excursions)")->capture_default_str();
    c->add_option("--boxes", boxes, "Observation window in boxes (anti-palm)")->capture_default_str();
    c->add_option("--cap", cap, "Rejection cap on the covering block length")->capture_default_str();
    c->add_option("--seed", seed, "Random seed")->required();
    c->add_option("--jobs", jobs, "Worker threads (0 = all cores); output does not depend on it")->capture_default_str();
    output.add(c, "json");
    c->final_callback([this] { run(); });
  }

  void run() {
    const auto spec = measure.spec();
    const auto src = measure.source(spec, source);
    json j;
    if (mode == "excursions") {
      json items = json::array();
      for (const auto& e : sample_excursions(src, count, seed, jobs)) items.push_back(e.str());
      j = {{"v", io::kSchemaVersion}, {"excursions", items}};
    } else if (mode == "palm") {
      j = io::to_json(sample_palm(src, count, seed, jobs));
    } else {
      if (boxes <= 0) throw InputError("--boxes must be positive");
      const auto s = sample_anti_palm(src, {boxes, 0, cap}, seed);
      j = {{"v", io::kSchemaVersion}, {"origin", s.config.origin()}, {"bits", s.config.str()}, {"records", s.records},
           {"boxes", boxes}, {"capped", s.capped}, {"proposals", s.proposals}};
    }
    j["measure"] = io::to_json(spec);
    j["seed"] = seed;
    if (output.json_mode()) {
      output.emit(j);
    } else {
      output.emit(j.contains("bits") ? j.at("bits").get<std::string>() : j.dump());
    }
  }
};

// ---- verify --------------------------------------------------------------------

struct VerifyCmd {
  MeasureOptions measure;
  std::string input;
  std::size_t count = 100000;
  std::uint64_t seed = 0;
  unsigned jobs = 0;
  double level = 1e-3;
  int k = 1;
  double p = -1.0;
  std::string pairs = "1,0,1,1;1,0,2,0";
  Coord boxes = 200000;
  int steps = 1;
  int block_len = 4;
  int batches = 100;
  double threshold = 4.0;
  std::string source = "walk";
  std::string config;
  std::size_t random = 1000;
  std::size_t max_boxes = 200;
  unsigned n_max = 7;
  double tol = 1e-6;
  Output output;

  CLI::App* common(CLI::App* v, const std::string& name, const std::string& help, bool seeded) {
    auto* c = v->add_subcommand(name, help);
    output.add(c, "json");
    if (seeded) {
      c->add_option("--seed", seed, "Random seed")->required();
      c->add_option("--jobs", jobs, "Worker threads (0 = all cores)")->capture_default_str();
    }
    return c;
  }

  void add(CLI::App& app) {
    auto* v = app.add_subcommand("verify", "Statistical and exact checks");
    v->require_subcommand(1);

    auto* g = common(v, "geometric", "Fit of a component row to its geometric law", true);
    measure.add(g);
    g->add_option("--input", input, "Palm sample JSON (default: draw one)");
    g->add_option("--count", count, "Excursions to draw when no input is given")->capture_default_str();
    g->add_option("-k,--k", k, "Row to test")->capture_default_str();
    g->add_option("--p", p, "Success probability (default 1 - q_k of the measure)");
    g->add_option("--level", level, "Significance level")->capture_default_str();
    g->final_callback([this] { geometric(); });

    auto* i = common(v, "independence", "Independence of component pairs", true);
    measure.add(i);
    i->add_option("--input", input, "Palm sample JSON (default: draw one)");
    i->add_option("--count", count, "Excursions to draw when no input is given")->capture_default_str();
    i->add_option("--pairs", pairs, "k,j,l,j2 quadruples separated by ';'")->capture_default_str();
    i->add_option("--level", level, "Significance level")->capture_default_str();
    i->final_callback([this] { independence(); });

    auto* t = common(v, "t-invariance", "Block frequencies of eta and T^steps eta", true);
    measure.add(t);
    t->add_option("--source", source, "Excursion source")->check(CLI::IsMember({"walk", "nu"}))->capture_default_str();
    t->add_option("--boxes", boxes, "Window size")->capture_default_str();
    t->add_option("--steps", steps, "Sweeps")->check(CLI::PositiveNumber)->capture_default_str();
    t->add_option("--block-len", block_len, "Block length")->check(CLI::Range(1, 12))->capture_default_str();
    t->add_option("--batches", batches, "Batches for the standard error")->check(CLI::Range(2, 100000))->capture_default_str();
    t->add_option("--threshold", threshold, "Pass if every |z| is at most this")->capture_default_str();
    t->final_callback([this] { t_invariance(); });

    auto* s = v->add_subcommand("shift", "Components of T eta are translates of those of eta");
    output.add(s, "json");
    s->add_option("config", config, "Configuration (omit to test random ones)");
    s->add_option("--random", random, "Number of random configurations")->capture_default_str();
    s->add_option("--max-boxes", max_boxes, "Largest random window")->capture_default_str();
    s->add_option("--seed", seed, "Random seed")->capture_default_str();
    s->final_callback([this] { shift(); });

    auto* b = v->add_subcommand("bijections", "Exhaustive excursion / slot-diagram round trips");
    output.add(b, "json");
    b->add_option("--n-max", n_max, "Largest half-length")->check(CLI::Range(0u, 12u))->capture_default_str();
    b->final_callback([this] { bijections(); });

    auto* pf = v->add_subcommand("partition", "Brute-force partition function against the closed form");
    output.add(pf, "json");
    measure.add(pf);
    pf->add_option("--n-max", n_max, "Largest half-length")->check(CLI::Range(1u, 200u))->capture_default_str();
    pf->add_option("--tol", tol, "Allowed difference")->capture_default_str();
    pf->final_callback([this] { partition(); });
  }

  ComponentArray components(const io::MeasureSpec& spec) {
    if (!input.empty()) return decompose(palm_config(read_json_input(input)));
    return decompose(sample_palm(measure.source(spec, "walk"), count, seed, jobs).config);
  }

  void finish(json report, bool pass) {
    report["v"] = io::kSchemaVersion;
    report["pass"] = pass;
    output.emit(report);
    if (!pass) throw VerificationFailed{};
  }

  void geometric() {
    const auto spec = measure.spec();
    const double prob = p >= 0.0 ? p : 1.0 - q_from_alpha(spec.alpha).at(k);
    const auto r = geometric_gof(components(spec), k, prob);
    auto j = io::to_json(r);
    j["k"] = k;
    j["p"] = prob;
    j["level"] = level;
    finish(j, r.p_value > level);
  }

  void independence() {
    const auto spec = measure.spec();
    std::vector<ComponentPair> list;
    std::stringstream ss(pairs);
    std::string item;
    while (std::getline(ss, item, ';')) {
      const auto v = io::parse_vector(item);
      if (v.size() != 4) throw InputError("each pair needs k,j,l,j2");
      list.push_back({static_cast<int>(v[0]), static_cast<std::int64_t>(v[1]), static_cast<int>(v[2]),
                      static_cast<std::int64_t>(v[3])});
    }
    if (list.empty()) throw InputError("no pairs given");
    const auto z = components(spec);
    json reports = json::array();
    bool pass = true;
    for (const auto& pr : list) {
      const auto r = independence_test(z, pr);
      auto j = io::to_json(r);
      j["pair"] = {pr.k, pr.j, pr.l, pr.j2};
      reports.push_back(j);
      pass = pass && r.p_value > level;
    }
    finish({{"tests", reports}, {"level", level}}, pass);
  }

  void t_invariance() {
    const auto spec = measure.spec();
    TInvarianceOptions o;
    o.boxes = boxes;
    o.steps = steps;
    o.block_len = block_len;
    o.batches = batches;
    o.seed = seed;
    if (boxes < static_cast<Coord>(batches) * block_len) throw PreconditionError("window too small for the batches");
    const auto r = t_invariance_test(measure.source(spec, source), o, measure.block_law(spec));
    auto j = io::to_json(r);
    j["threshold"] = threshold;
    finish(j, r.pass(threshold));
  }

  void shift() {
    json failures = json::array();
    std::size_t tested = 0;
    auto one = [&](const BallConfig& c) {
      ++tested;
      const auto r = component_shift_check(c);
      const bool conserved = soliton_counts(c) == soliton_counts(evolve(c));
      if (!r.ok() || !conserved) failures.push_back({{"config", io::to_json(c)}, {"report", io::to_json(r)}});
      return r;
    };
    json j;
    if (!config.empty()) {
      j["report"] = io::to_json(one(read_config(config, 1)));
    } else {
      Rng rng(seed);
      for (std::size_t t = 0; t < random; ++t) {
        const std::size_t len = 1 + rng.below(std::max<std::size_t>(max_boxes, 1));
        const double density = 0.05 + 0.4 * rng.uniform();
        std::vector<Bit> bits(len);
        for (auto& b : bits) b = rng.bernoulli(density);
        one(BallConfig(1, bits));
      }
    }
    j["tested"] = tested;
    j["failures"] = failures;
    finish(j, failures.empty());
  }

  void bijections() {
    json by_n = json::array();
    std::size_t total = 0, bad = 0;
    for (std::size_t n = 0; n <= n_max; ++n) {
      std::size_t count_n = 0;
      for (const auto& e : all_excursions(n)) {
        ++count_n;
        const auto x = diagram_from_excursion(e);
        if (excursion_from_diagram(x) != e || static_cast<std::size_t>(x.half_length()) != n) ++bad;
      }
      total += count_n;
      by_n.push_back({{"n", n}, {"excursions", count_n}, {"catalan", static_cast<double>(catalan(static_cast<unsigned>(n)))}});
    }
    finish({{"n_max", n_max}, {"excursions", total}, {"failures", bad}, {"by_half_length", by_n}}, bad == 0);
  }

  void partition() {
    const auto spec = measure.spec();
    const auto bf = partition_bruteforce(spec.alpha, n_max);
    const double closed = partition_closed(spec.alpha).Z;
    const double diff = std::abs(static_cast<double>(bf.value) - closed);
    finish({{"measure", io::to_json(spec)},
            {"n_max", n_max},
            {"brute_force", static_cast<double>(bf.value)},
            {"tail_bound", static_cast<double>(bf.tail_bound)},
            {"closed_form", closed},
            {"difference", diff},
            {"tol", tol}},
           diff <= tol);
  }
};

// ---- render --------------------------------------------------------------------

struct RenderCmd {
  std::string config;
  Coord origin = 1;
  bool color = false;
  Output output;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("render", "ASCII picture with one class per soliton size");
    c->add_option("config", config, "0/1 string, JSON, or - for stdin");
    c->add_option("--origin", origin, "Coordinate of the first box")->capture_default_str();
    c->add_flag("--color", color, "Use ANSI colors");
    output.add(c);
    c->final_callback([this] { run(); });
  }

  static const char* color_name(int k) {
    static const char* names[] = {"violet", "red", "green", "blue", "orange", "cyan"};
    return names[(k - 1) % 6];
  }
  static const char* ansi(int k) {
    static const char* codes[] = {"\x1b[35m", "\x1b[31m", "\x1b[32m", "\x1b[34m", "\x1b[33m", "\x1b[36m"};
    return codes[(k - 1) % 6];
  }

  void run() {
    const auto eta = read_config(config, origin);
    const Coord from = std::min<Coord>(eta.origin(), 0);
    const auto rec = records(eta);
    Coord to = eta.end();
    if (eta.has_balls()) {
      Coord closing = eta.trimmed().end();
      while (!rec.contains(closing)) ++closing;
      to = std::max(to, closing + 1);
    }
    std::map<Coord, int> size_at;
    for (const auto& s : ts_decompose(eta)) {
      for (Coord z : s.support()) size_at[z] = s.size;
    }
    if (output.json_mode()) {
      json boxes = json::array();
      for (Coord z = from; z < to; ++z) {
        json b = {{"box", z}, {"bit", eta[z]}};
        if (rec.contains(z)) {
          b["class"] = "record";
        } else if (size_at.count(z)) {
          b["class"] = "soliton-" + std::to_string(size_at[z]);
          b["color"] = color_name(size_at[z]);
        }
        boxes.push_back(b);
      }
      output.emit(json{{"v", io::kSchemaVersion}, {"from", from}, {"boxes", boxes}});
      return;
    }
    std::string bits, classes;
    for (Coord z = from; z < to; ++z) {
      const char b = eta[z] ? '1' : '0';
      if (rec.contains(z)) {
        bits += b;
        classes += 'x';
        continue;
      }
      const int k = size_at.count(z) ? size_at[z] : 0;
      const char label = k == 0 ? '?' : (k < 10 ? char('0' + k) : '+');
      if (color && k > 0) {
        bits += std::string(ansi(k)) + b + "\x1b[0m";
        classes += std::string(ansi(k)) + label + "\x1b[0m";
      } else {
        bits += b;
        classes += label;
      }
    }
    std::string legend = "boxes " + std::to_string(from) + ".." + std::to_string(to - 1) + "; x = record";
    std::set<int> sizes;
    for (const auto& [z, k] : size_at) sizes.insert(k);
    for (int k : sizes) legend += ", " + std::to_string(k) + " = " + color_name(k) + " " + std::to_string(k) + "-soliton";
    output.emit(bits + "\n" + classes + "\n" + legend + "\n");
  }
};

// ---- measure -------------------------------------------------------------------

struct MeasureCmd {
  MeasureOptions measure;
  int K = 0;
  Output output;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("measure", "q-transform, partition function and densities of a measure");
    measure.add(c);
    c->add_option("--K", K, "Number of q_k to compute (default: until the tail is negligible)");
    output.add(c);
    c->final_callback([this] { run(); });
  }

  void run() {
    const auto spec = measure.spec();
    const auto q = K > 0 ? q_from_alpha(spec.alpha, K) : q_from_alpha(spec.alpha);
    const auto part = partition_closed(q);
    const auto beta = beta_recursion(q);
    std::vector<double> alpha;
    for (int k = 1; k <= q.size(); ++k) alpha.push_back(spec.alpha.at(k));
    if (output.json_mode()) {
      output.emit(json{{"v", io::kSchemaVersion},
                       {"measure", io::to_json(spec)},
                       {"alpha", alpha},
                       {"q", q.values},
                       {"Z", part.Z},
                       {"Zm", part.Zm},
                       {"beta0", beta.beta.empty() ? 1.0 : beta.beta[0]},
                       {"kappa", beta.kappa},
                       {"density", beta.density}});
      return;
    }
    std::ostringstream os;
    os.precision(12);
    os << "family  " << spec.family << "\nK       " << q.size() << "\nZ       " << part.Z << "\nkappa   " << beta.kappa
       << "\ndensity " << beta.density << "\n";
    for (int k = 1; k <= std::min(q.size(), 10); ++k) os << std::left << std::setw(8) << ("q_" + std::to_string(k)) << q.at(k) << '\n';
    output.emit(os.str());
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Box-ball system: dynamics, soliton decomposition, excursion measures"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "bbs 1.0");
  EvolveCmd evolve_cmd;
  DecomposeCmd decompose_cmd;
  ReconstructCmd reconstruct_cmd;
  SampleCmd sample_cmd;
  VerifyCmd verify_cmd;
  RenderCmd render_cmd;
  MeasureCmd measure_cmd;
  evolve_cmd.add(app);
  decompose_cmd.add(app);
  reconstruct_cmd.add(app);
  sample_cmd.add(app);
  verify_cmd.add(app);
  render_cmd.add(app);
  measure_cmd.add(app);
  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  } catch (const VerificationFailed&) {
    return kVerifyFailed;
  } catch (const InputError& e) {
    std::cerr << "bbs: invalid input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const PreconditionError& e) {
    std::cerr << "bbs: precondition failed: " << e.what() << '\n';
    return kPrecondition;
  } catch (const std::out_of_range& e) {
    std::cerr << "bbs: precondition failed: " << e.what() << '\n';
    return kPrecondition;
  }
  return kOk;
}
