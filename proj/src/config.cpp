#include "augspike/config.hpp"

#include <set>
#include <string>

namespace augspike {

NLOHMANN_JSON_SERIALIZE_ENUM(CoefficientView,
                             {{CoefficientView::kAugmented, "augmented"},
                              {CoefficientView::kBlindRule, "blind_rule"},
                              {CoefficientView::kBinary, "binary"}})

inline void to_json(nlohmann::json& j, const LearningRule& r) {
  j = std::string(ToString(r));
}
inline void from_json(const nlohmann::json& j, LearningRule& r) {
  r = ParseLearningRule(j.get<std::string>());
}

inline void to_json(nlohmann::json& j, const CoefficientRegion& r) {
  j = nlohmann::json::array({r.begin, r.end, r.coefficient});
}
inline void from_json(const nlohmann::json& j, CoefficientRegion& r) {
  if (!j.is_array() || j.size() != 3) {
    throw FormatError("coefficient region must be [begin, end, coefficient]");
  }
  r = {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace augspike

namespace augspike::experiments {

NLOHMANN_JSON_SERIALIZE_ENUM(LatencyMode, {{LatencyMode::kRandom, "random"},
                                           {LatencyMode::kFixed, "fixed"}})

namespace {

// Applies a field visitor in one of two directions. Reading rejects keys the
// visitor never names.
class Reader {
 public:
  Reader(const nlohmann::json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw FormatError(where_ + ": expected an object");
  }
  template <typename T>
  void operator()(const char* key, T& field) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      Get(j_.at(key), field, where_ + "." + key);
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(where_ + "." + key + ": " + e.what());
    }
  }
  void Finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!seen_.count(k)) throw FormatError(where_ + ": unknown key '" + k + "'");
    }
  }

 private:
  template <typename T>
  static void Get(const nlohmann::json& j, T& field, const std::string& where);

  const nlohmann::json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

class Writer {
 public:
  explicit Writer(nlohmann::json& j) : j_(j) { j_ = nlohmann::json::object(); }
  template <typename T>
  void operator()(const char* key, T& field) {
    Put(j_[key], field);
  }

 private:
  template <typename T>
  static void Put(nlohmann::json& j, const T& field);

  nlohmann::json& j_;
};

template <typename V>
void Fields(NeuronParams& c, V&& v) {
  v("tau_m_ms", c.tau_m_ms);
  v("tau_s_ms", c.tau_s_ms);
  v("threshold", c.threshold);
}

template <typename V>
void Fields(LearnParams& c, V&& v) {
  v("eta", c.eta);
  v("mu", c.mu);
  v("w_mean", c.w_mean);
  v("w_std", c.w_std);
}

template <typename V>
void Fields(FeatureTaskSpec& c, V&& v) {
  v("n_afferents", c.n_afferents);
  v("n_features", c.n_features);
  v("feature_window", c.feature_window);
  v("feature_rate", c.feature_rate);
  v("background_window", c.background_window);
  v("background_rate", c.background_rate);
  v("mean_occurrences", c.mean_occurrences);
  v("global_noise_rate", c.global_noise_rate);
  v("shared_timings", c.shared_timings);
  v("targets", c.targets);
}

template <typename V>
void Fields(Classify3Config& c, V&& v) {
  v("seed", c.seed);
  v("runs", c.runs);
  v("n_afferents", c.n_afferents);
  v("rate", c.rate);
  v("window", c.window);
  v("coefficients", c.coefficients);
  v("cycles", c.cycles);
  v("plateau_from", c.plateau_from);
  v("neuron", c.neuron);
  v("learn", c.learn);
  v("ablation", c.ablation);
}

template <typename V>
void Fields(CapacityConfig& c, V&& v) {
  v("seed", c.seed);
  v("runs", c.runs);
  v("n_afferents", c.n_afferents);
  v("window", c.window);
  v("q_values", c.q_values);
  v("modes", c.modes);
  v("alphas_random", c.alphas_random);
  v("alphas_fixed", c.alphas_fixed);
  v("cap", c.cap);
  v("measure_cycles", c.measure_cycles);
  v("stop_at_crossing", c.stop_at_crossing);
  v("chunk", c.chunk);
  v("neuron", c.neuron);
  v("learn", c.learn);
}

template <typename V>
void Fields(PsdConfig& c, V&& v) {
  v("seed", c.seed);
  v("runs", c.runs);
  v("n_afferents", c.n_afferents);
  v("window", c.window);
  v("regions", c.regions);
  v("desired", c.desired);
  v("zeta", c.zeta);
  v("max_epochs", c.max_epochs);
  v("causal_window", c.causal_window);
  v("trace_dt", c.trace_dt);
  v("neuron", c.neuron);
  v("learn", c.learn);
  v("ablation", c.ablation);
}

template <typename V>
void Fields(FeatureConfig& c, V&& v) {
  v("seed", c.seed);
  v("runs", c.runs);
  v("task", c.task);
  v("coefficients", c.coefficients);
  v("trials_per_cycle", c.trials_per_cycle);
  v("max_cycles", c.max_cycles);
  v("eval_trials", c.eval_trials);
  v("neuron", c.neuron);
  v("learn", c.learn);
  v("ablation", c.ablation);
  v("run_ablation", c.run_ablation);
}

template <typename V>
void Fields(RobustnessConfig& c, V&& v) {
  v("seed", c.seed);
  v("runs", c.runs);
  v("n_afferents", c.n_afferents);
  v("rate", c.rate);
  v("window", c.window);
  v("coefficients", c.coefficients);
  v("categories", c.categories);
  v("cycles", c.cycles);
  v("desired_spikes", c.desired_spikes);
  v("psd_zeta", c.psd_zeta);
  v("readout_spikes", c.readout_spikes);
  v("train_sigma", c.train_sigma);
  v("train_p_del", c.train_p_del);
  v("sigma_grid", c.sigma_grid);
  v("p_del_grid", c.p_del_grid);
  v("eval_trials", c.eval_trials);
  v("neuron", c.neuron);
  v("learn", c.learn);
}

template <typename V>
void Fields(VisualConfig& c, V&& v) {
  v("seed", c.seed);
  v("runs", c.runs);
  v("data", c.data);
  v("train_fraction", c.train_fraction);
  v("encoding_window", c.encoding_window);
  v("threshold_fraction", c.threshold_fraction);
  v("epochs", c.epochs);
  v("tdp_desired", c.tdp_desired);
  v("rules", c.rules);
  v("neuron", c.neuron);
  v("learn", c.learn);
}

template <typename T>
concept HasFields = requires(T& t) { Fields(t, [](const char*, auto&) {}); };

template <typename T>
void Reader::Get(const nlohmann::json& j, T& field, const std::string& where) {
  if constexpr (HasFields<T>) {
    Reader r(j, where);
    Fields(field, r);
    r.Finish();
  } else if constexpr (std::is_same_v<T, std::filesystem::path>) {
    field = j.get<std::string>();
  } else {
    field = j.get<T>();
  }
}

template <typename T>
void Writer::Put(nlohmann::json& j, const T& field) {
  if constexpr (HasFields<T>) {
    Writer w(j);
    Fields(const_cast<T&>(field), w);
  } else if constexpr (std::is_same_v<T, std::filesystem::path>) {
    j = field.string();
  } else {
    j = field;
  }
}

template <typename T>
T ParseInto(const nlohmann::json& doc, T config) {
  if (!doc.is_object()) throw FormatError("config: expected an object");
  auto body = doc;
  body.erase("experiment");
  Reader r(body, "config");
  Fields(config, r);
  r.Finish();
  return config;
}

template <typename T>
nlohmann::json Dump(const T& config) {
  nlohmann::json j;
  Writer w(j);
  Fields(const_cast<T&>(config), w);
  return j;
}

template <typename T, typename Run>
ExperimentOutcome Execute(ExperimentId id, T config,
                          const RunOverrides& overrides, Run&& run) {
  if (overrides.seed) config.seed = *overrides.seed;
  if (overrides.runs) config.runs = *overrides.runs;
  ExperimentOutcome out;
  out.seed = config.seed;
  out.runs = config.runs;
  out.resolved = Dump(config);
  out.resolved["experiment"] = std::string(ToString(id));
  out.report = run(config).report;
  return out;
}

}  // namespace

ExperimentId ExperimentOf(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("experiment") ||
      !doc["experiment"].is_string()) {
    throw FormatError("config: missing string key 'experiment'");
  }
  return ParseExperimentId(doc["experiment"].get<std::string>());
}

Classify3Config ParseClassify3(const nlohmann::json& doc) {
  return ParseInto(doc, Classify3Config{});
}
CapacityConfig ParseCapacity(const nlohmann::json& doc) {
  return ParseInto(doc, CapacityConfig{});
}
PsdConfig ParsePsd(const nlohmann::json& doc) {
  return ParseInto(doc, PsdConfig{});
}
FeatureConfig ParseFeature(const nlohmann::json& doc) {
  return ParseInto(doc, FeatureConfig{});
}
RobustnessConfig ParseRobustness(const nlohmann::json& doc) {
  return ParseInto(doc, RobustnessConfig{});
}
VisualConfig ParseVisual(const nlohmann::json& doc) {
  return ParseInto(doc, VisualConfig{});
}

nlohmann::json ResolveConfig(ExperimentId id, const nlohmann::json& doc) {
  nlohmann::json out;
  switch (id) {
    case ExperimentId::kClassify3: out = Dump(ParseClassify3(doc)); break;
    case ExperimentId::kCapacity: out = Dump(ParseCapacity(doc)); break;
    case ExperimentId::kPsdTiming:
    case ExperimentId::kCausality: out = Dump(ParsePsd(doc)); break;
    case ExperimentId::kFeatureDetect: out = Dump(ParseFeature(doc)); break;
    case ExperimentId::kRobustness: out = Dump(ParseRobustness(doc)); break;
    case ExperimentId::kVisual: out = Dump(ParseVisual(doc)); break;
  }
  out["experiment"] = std::string(ToString(id));
  return out;
}

ExperimentOutcome RunFromConfig(ExperimentId id, const nlohmann::json& doc,
                                const RunOverrides& overrides) {
  if (doc.is_object() && doc.contains("experiment") && ExperimentOf(doc) != id) {
    throw FormatError("config names experiment '" +
                      doc["experiment"].get<std::string>() + "', expected '" +
                      std::string(ToString(id)) + "'");
  }
  switch (id) {
    case ExperimentId::kClassify3:
      return Execute(id, ParseClassify3(doc), overrides, RunClassify3);
    case ExperimentId::kCapacity: {
      auto c = ParseCapacity(doc);
      if (overrides.paper_scale) {
        c.n_afferents = 500;
        c.runs = 100;
      }
      return Execute(id, c, overrides, RunCapacity);
    }
    case ExperimentId::kPsdTiming:
      return Execute(id, ParsePsd(doc), overrides, RunPsdTiming);
    case ExperimentId::kCausality:
      return Execute(id, ParsePsd(doc), overrides, RunCausality);
    case ExperimentId::kFeatureDetect:
      return Execute(id, ParseFeature(doc), overrides, RunFeatureDetect);
    case ExperimentId::kRobustness: {
      auto c = ParseRobustness(doc);
      if (overrides.paper_scale) c.runs = 100;
      return Execute(id, c, overrides, RunRobustness);
    }
    case ExperimentId::kVisual:
      return Execute(id, ParseVisual(doc), overrides, RunVisual);
  }
  throw ParameterError("unhandled experiment");
}

}  // namespace augspike::experiments
