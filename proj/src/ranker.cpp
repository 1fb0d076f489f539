#include "readrank/ranker.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "readrank/errors.hpp"
#include "readrank/util.hpp"

namespace readrank {

namespace {

using json = nlohmann::ordered_json;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// log(1 + exp(-d)) without overflow.
double logistic_loss(double d) {
  if (d > 0) return std::log1p(std::exp(-d));
  return -d + std::log1p(std::exp(d));
}

TrainResult train_ranksvm(const std::vector<TrainedPair>& pairs, const TrainConfig& cfg,
                          std::size_t dim) {
  std::vector<std::vector<double>> diffs;
  diffs.reserve(pairs.size());
  for (const auto& p : pairs) {
    std::vector<double> d(dim);
    for (std::size_t i = 0; i < dim; ++i) d[i] = p.x_hard[i] - p.x_simple[i];
    diffs.push_back(std::move(d));
  }

  auto objective = [&](const std::vector<double>& w) {
    double hinge = 0.0;
    for (const auto& d : diffs) hinge += std::max(0.0, 1.0 - dot(w, d));
    return 0.5 * cfg.lambda * dot(w, w) + hinge / static_cast<double>(diffs.size());
  };

  std::vector<double> w(dim, 0.0);
  TrainResult result;
  result.epoch_loss.push_back(objective(w));

  Rng rng(cfg.seed);
  std::vector<std::size_t> order(diffs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  long step = 0;
  // The decaying-step subgradient pass does not by itself guarantee a
  // monotone full-batch objective, so an epoch is only accepted when it
  // does not increase it; otherwise the step scale is halved and the same
  // permutation is replayed. Deterministic under the seed.
  double scale = 1.0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    bool accepted = false;
    while (scale >= 1e-12) {
      std::vector<double> w_try = w;
      long step_try = step;
      for (std::size_t idx : order) {
        ++step_try;
        double eta = scale * cfg.learning_rate /
                     (1.0 + cfg.lambda * static_cast<double>(step_try));
        const std::vector<double>& d = diffs[idx];
        double margin = dot(w_try, d);
        double shrink = 1.0 - eta * cfg.lambda;
        if (margin < 1.0) {
          for (std::size_t i = 0; i < dim; ++i) w_try[i] = shrink * w_try[i] + eta * d[i];
        } else {
          for (std::size_t i = 0; i < dim; ++i) w_try[i] = shrink * w_try[i];
        }
      }
      double j_try = objective(w_try);
      if (j_try <= result.epoch_loss.back()) {
        w = std::move(w_try);
        step = step_try;
        result.epoch_loss.push_back(j_try);
        accepted = true;
        break;
      }
      scale *= 0.5;
    }
    if (!accepted) result.epoch_loss.push_back(result.epoch_loss.back());
  }

  result.model.params = LinearModel{std::move(w)};
  return result;
}

NetModel init_net(std::size_t dim, const TrainConfig& cfg, Rng& rng) {
  NetModel net;
  net.hidden = cfg.hidden_size;
  net.w1.resize(static_cast<std::size_t>(cfg.hidden_size) * dim);
  net.b1.resize(static_cast<std::size_t>(cfg.hidden_size));
  net.w2.resize(static_cast<std::size_t>(cfg.hidden_size));
  for (auto& v : net.w1) v = rng.uniform(-0.1, 0.1);
  for (auto& v : net.b1) v = rng.uniform(-0.1, 0.1);
  for (auto& v : net.w2) v = rng.uniform(-0.1, 0.1);
  net.b2 = rng.uniform(-0.1, 0.1);
  return net;
}

struct NetForward {
  std::vector<double> hidden;  // sigmoid activations
  double score = 0.0;
};

NetForward net_forward(const NetModel& net, const std::vector<double>& x) {
  NetForward fw;
  std::size_t dim = x.size();
  fw.hidden.resize(static_cast<std::size_t>(net.hidden));
  for (std::size_t h = 0; h < fw.hidden.size(); ++h) {
    double z = net.b1[h];
    const double* row = net.w1.data() + h * dim;
    for (std::size_t i = 0; i < dim; ++i) z += row[i] * x[i];
    fw.hidden[h] = sigmoid(z);
  }
  fw.score = net.b2;
  for (std::size_t h = 0; h < fw.hidden.size(); ++h)
    fw.score += net.w2[h] * fw.hidden[h];
  return fw;
}

// d(score)/d(params) for one input, scaled by `coeff` and accumulated.
void accumulate_score_gradient(const NetModel& net, const std::vector<double>& x,
                               const NetForward& fw, double coeff, NetGradient& g) {
  std::size_t dim = x.size();
  for (std::size_t h = 0; h < fw.hidden.size(); ++h) {
    double a = fw.hidden[h];
    g.w2[h] += coeff * a;
    double dz = coeff * net.w2[h] * a * (1.0 - a);
    g.b1[h] += dz;
    double* row = g.w1.data() + h * dim;
    for (std::size_t i = 0; i < dim; ++i) row[i] += dz * x[i];
  }
  g.b2 += coeff;
}

TrainResult train_ranknet(const std::vector<TrainedPair>& pairs, const TrainConfig& cfg,
                          std::size_t dim) {
  Rng rng(cfg.seed);
  NetModel net = init_net(dim, cfg, rng);

  std::vector<std::size_t> order(pairs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  TrainResult result;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    for (std::size_t idx : order) {
      const TrainedPair& p = pairs[idx];
      NetGradient g = ranknet_pair_gradient(net, p.x_hard, p.x_simple);
      loss_sum += ranknet_pair_loss(net, p.x_hard, p.x_simple);
      double lr = cfg.learning_rate;
      for (std::size_t i = 0; i < net.w1.size(); ++i) net.w1[i] -= lr * g.w1[i];
      for (std::size_t i = 0; i < net.b1.size(); ++i) net.b1[i] -= lr * g.b1[i];
      for (std::size_t i = 0; i < net.w2.size(); ++i) net.w2[i] -= lr * g.w2[i];
      net.b2 -= lr * g.b2;
    }
    result.epoch_loss.push_back(loss_sum / static_cast<double>(pairs.size()));
  }

  result.model.params = std::move(net);
  return result;
}

struct WeakCandidateSearch {
  int feature = -1;
  double threshold = 0.0;
  double r = 0.0;
  bool found = false;
};

// Direct O(features x thresholds x pairs) scan, candidates in (feature
// ascending, threshold ascending) order, strict improvement on |r|. The
// brute-force test oracle enumerates identically, so selections agree
// exactly, including float ties.
WeakCandidateSearch search_weak(const std::vector<TrainedPair>& pairs,
                                const std::vector<std::vector<double>>& thresholds,
                                const std::vector<double>& dist) {
  WeakCandidateSearch best;
  for (std::size_t f = 0; f < thresholds.size(); ++f) {
    for (double theta : thresholds[f]) {
      double r = 0.0;
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        double h_hard = pairs[p].x_hard[f] > theta ? 1.0 : 0.0;
        double h_simple = pairs[p].x_simple[f] > theta ? 1.0 : 0.0;
        r += dist[p] * (h_hard - h_simple);
      }
      if (!best.found || std::fabs(r) > std::fabs(best.r)) {
        best = {static_cast<int>(f), theta, r, true};
      }
    }
  }
  return best;
}

TrainResult train_rankboost(const std::vector<TrainedPair>& pairs, const TrainConfig& cfg,
                            std::size_t dim, const BoostObserver& observer) {
  // Candidate thresholds: midpoints of consecutive distinct observed values.
  std::vector<std::vector<double>> thresholds(dim);
  for (std::size_t f = 0; f < dim; ++f) {
    std::vector<double> values;
    values.reserve(pairs.size() * 2);
    for (const auto& p : pairs) {
      values.push_back(p.x_hard[f]);
      values.push_back(p.x_simple[f]);
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (std::size_t i = 0; i + 1 < values.size(); ++i)
      thresholds[f].push_back(0.5 * (values[i] + values[i + 1]));
  }

  std::vector<double> dist(pairs.size(), 1.0 / static_cast<double>(pairs.size()));
  BoostModel model;
  TrainResult result;
  for (int t = 0; t < cfg.rounds; ++t) {
    WeakCandidateSearch best = search_weak(pairs, thresholds, dist);
    if (!best.found) {
      // All features constant: pad with no-op rounds so the ensemble still
      // has the configured length.
      model.rounds.push_back({0, 0.0, 0.0});
      result.round_r.push_back(0.0);
      result.round_dist_sum.push_back(1.0);
      continue;
    }
    if (observer) observer({t, dist, best.feature, best.threshold, best.r});

    const double clip = 1.0 - 1e-10;
    double r = std::clamp(best.r, -clip, clip);
    double alpha = 0.5 * std::log((1.0 + r) / (1.0 - r));

    std::size_t f = static_cast<std::size_t>(best.feature);
    double z = 0.0;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      double h_hard = pairs[p].x_hard[f] > best.threshold ? 1.0 : 0.0;
      double h_simple = pairs[p].x_simple[f] > best.threshold ? 1.0 : 0.0;
      dist[p] *= std::exp(alpha * (h_simple - h_hard));
      z += dist[p];
    }
    double sum = 0.0;
    for (double& d : dist) {
      d /= z;
      sum += d;
    }

    model.rounds.push_back({best.feature, best.threshold, alpha});
    result.round_r.push_back(best.r);
    result.round_dist_sum.push_back(sum);
  }

  result.model.params = std::move(model);
  return result;
}

json normalizer_to_json(const Normalizer& n) {
  return json{{"mean", n.mean}, {"std", n.stddev}};
}

Normalizer normalizer_from_json(const json& j) {
  Normalizer n;
  n.mean = j.at("mean").get<std::vector<double>>();
  n.stddev = j.at("std").get<std::vector<double>>();
  if (n.mean.size() != n.stddev.size())
    throw ModelFormatError("normalizer mean/std length mismatch");
  return n;
}

}  // namespace

RankData RankData::from_matrix(const FeatureMatrix& m) {
  RankData data;
  data.schema = m.feature_names;
  data.items.reserve(m.rows.size());
  for (const auto& row : m.rows) {
    RankInstance inst;
    inst.qid = row.group_id;
    inst.relevance = row.level;
    inst.x = row.values;
    inst.text = row.text;
    data.items.push_back(std::move(inst));
  }
  return data;
}

RankData RankData::with_columns(const std::vector<std::size_t>& column_indices) const {
  RankData out;
  for (std::size_t c : column_indices) out.schema.push_back(schema[c]);
  out.items.reserve(items.size());
  for (const auto& inst : items) {
    RankInstance copy = inst;
    copy.x.clear();
    for (std::size_t c : column_indices) copy.x.push_back(inst.x[c]);
    out.items.push_back(std::move(copy));
  }
  return out;
}

Normalizer Normalizer::fit(const std::vector<RankInstance>& items, std::size_t dim) {
  Normalizer n;
  n.mean.assign(dim, 0.0);
  n.stddev.assign(dim, 1.0);
  if (items.empty()) return n;
  for (const auto& inst : items)
    for (std::size_t i = 0; i < dim; ++i) n.mean[i] += inst.x[i];
  for (double& m : n.mean) m /= static_cast<double>(items.size());
  for (std::size_t i = 0; i < dim; ++i) {
    double var = 0.0;
    for (const auto& inst : items) {
      double d = inst.x[i] - n.mean[i];
      var += d * d;
    }
    var /= static_cast<double>(items.size());
    n.stddev[i] = var > 0.0 ? std::sqrt(var) : 1.0;
  }
  return n;
}

std::vector<double> Normalizer::apply(const std::vector<double>& x) const {
  std::vector<double> z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = (x[i] - mean[i]) / stddev[i];
  return z;
}

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::RankSvm: return "ranksvm";
    case Algorithm::RankNet: return "ranknet";
    case Algorithm::RankBoost: return "rankboost";
  }
  return "ranksvm";
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "ranksvm") return Algorithm::RankSvm;
  if (name == "ranknet") return Algorithm::RankNet;
  if (name == "rankboost") return Algorithm::RankBoost;
  throw ModelFormatError("unknown algorithm '" + name + "'");
}

std::string TrainConfig::config_hash() const {
  std::string repr = "algo=" + algorithm_name(algorithm) +
                     ";lambda=" + format_double(lambda) +
                     ";lr=" + format_double(learning_rate) +
                     ";epochs=" + std::to_string(epochs) +
                     ";hidden=" + std::to_string(hidden_size) +
                     ";rounds=" + std::to_string(rounds) +
                     ";seed=" + std::to_string(seed);
  return hex64(fnv1a64(repr));
}

std::vector<std::pair<std::size_t, std::size_t>> rank_pair_indices(
    const std::vector<RankInstance>& items) {
  std::vector<std::string> qid_order;
  std::map<std::string, std::vector<std::size_t>> by_qid;
  for (std::size_t i = 0; i < items.size(); ++i) {
    auto [it, inserted] = by_qid.try_emplace(items[i].qid);
    if (inserted) qid_order.push_back(items[i].qid);
    it->second.push_back(i);
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& qid : qid_order) {
    const auto& members = by_qid[qid];
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        int ra = items[members[a]].relevance;
        int rb = items[members[b]].relevance;
        if (ra == rb) continue;  // split sentences: no constraint
        if (ra > rb)
          pairs.emplace_back(members[a], members[b]);
        else
          pairs.emplace_back(members[b], members[a]);
      }
    }
  }
  return pairs;
}

std::vector<TrainedPair> make_pairs(const std::vector<RankInstance>& items,
                                    const Normalizer& norm) {
  std::vector<TrainedPair> out;
  for (auto [h, s] : rank_pair_indices(items))
    out.push_back({norm.apply(items[h].x), norm.apply(items[s].x)});
  return out;
}

double ranksvm_objective(const std::vector<double>& w,
                         const std::vector<TrainedPair>& pairs, double lambda) {
  double hinge = 0.0;
  for (const auto& p : pairs) {
    double margin = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
      margin += w[i] * (p.x_hard[i] - p.x_simple[i]);
    hinge += std::max(0.0, 1.0 - margin);
  }
  return 0.5 * lambda * dot(w, w) + hinge / static_cast<double>(pairs.size());
}

double net_score(const NetModel& net, const std::vector<double>& x) {
  return net_forward(net, x).score;
}

double ranknet_pair_loss(const NetModel& net, const std::vector<double>& x_hard,
                         const std::vector<double>& x_simple) {
  double d = net_forward(net, x_hard).score - net_forward(net, x_simple).score;
  return logistic_loss(d);
}

NetGradient ranknet_pair_gradient(const NetModel& net,
                                  const std::vector<double>& x_hard,
                                  const std::vector<double>& x_simple) {
  NetForward fh = net_forward(net, x_hard);
  NetForward fs = net_forward(net, x_simple);
  double d = fh.score - fs.score;
  // dLoss/dd for loss = log(1 + exp(-d)).
  double coeff = -1.0 / (1.0 + std::exp(d));
  NetGradient g;
  g.w1.assign(net.w1.size(), 0.0);
  g.b1.assign(net.b1.size(), 0.0);
  g.w2.assign(net.w2.size(), 0.0);
  accumulate_score_gradient(net, x_hard, fh, coeff, g);
  accumulate_score_gradient(net, x_simple, fs, -coeff, g);
  return g;
}

TrainResult train(const RankData& data, const TrainConfig& cfg,
                  const BoostObserver& observer) {
  std::size_t dim = data.schema.size();
  Normalizer norm = Normalizer::fit(data.items, dim);
  std::vector<TrainedPair> pairs = make_pairs(data.items, norm);
  if (pairs.empty()) throw NoTrainingPairs();

  TrainResult result;
  switch (cfg.algorithm) {
    case Algorithm::RankSvm: result = train_ranksvm(pairs, cfg, dim); break;
    case Algorithm::RankNet: result = train_ranknet(pairs, cfg, dim); break;
    case Algorithm::RankBoost: result = train_rankboost(pairs, cfg, dim, observer); break;
  }
  result.model.algorithm = algorithm_name(cfg.algorithm);
  result.model.schema = data.schema;
  result.model.normalizer = std::move(norm);
  return result;
}

double RankModel::score_raw(const std::vector<double>& x) const {
  if (x.size() != schema.size())
    throw SchemaError("feature count " + std::to_string(x.size()) +
                      " does not match model schema size " +
                      std::to_string(schema.size()));
  std::vector<double> z = normalizer.apply(x);
  if (const auto* lin = std::get_if<LinearModel>(&params)) {
    return dot(lin->w, z);
  }
  if (const auto* net = std::get_if<NetModel>(&params)) {
    return net_score(*net, z);
  }
  const auto& boost = std::get<BoostModel>(params);
  double s = 0.0;
  for (const auto& weak : boost.rounds)
    if (z[static_cast<std::size_t>(weak.feature)] > weak.threshold) s += weak.alpha;
  return s;
}

double RankModel::score(const FeatureVector& fv) const {
  if (fv.values.size() != schema.size())
    throw SchemaError("feature vector does not match model schema");
  std::vector<double> x(fv.values.size());
  for (std::size_t i = 0; i < fv.values.size(); ++i) {
    if (fv.values[i].first != schema[i])
      throw SchemaError("feature '" + fv.values[i].first + "' at position " +
                        std::to_string(i) + " does not match schema entry '" +
                        schema[i] + "'");
    x[i] = fv.values[i].second;
  }
  return score_raw(x);
}

void save_model(const RankModel& model, const std::string& path) {
  json j;
  j["version"] = 1;
  j["algorithm"] = model.algorithm;
  j["schema"] = model.schema;
  j["normalizer"] = normalizer_to_json(model.normalizer);
  if (const auto* lin = std::get_if<LinearModel>(&model.params)) {
    j["params"] = json{{"type", "linear"}, {"w", lin->w}};
  } else if (const auto* net = std::get_if<NetModel>(&model.params)) {
    j["params"] = json{{"type", "net"},   {"hidden", net->hidden}, {"w1", net->w1},
                       {"b1", net->b1},   {"w2", net->w2},         {"b2", net->b2}};
  } else {
    const auto& boost = std::get<BoostModel>(model.params);
    json rounds = json::array();
    for (const auto& weak : boost.rounds)
      rounds.push_back(json{{"feature", weak.feature},
                            {"threshold", weak.threshold},
                            {"alpha", weak.alpha}});
    j["params"] = json{{"type", "boost"}, {"rounds", std::move(rounds)}};
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path);
  out << j.dump(2) << '\n';
}

RankModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ModelFormatError("cannot parse model file " + path + ": " + e.what());
  }
  try {
    if (j.at("version").get<int>() != 1)
      throw ModelFormatError("unsupported model version in " + path);
    RankModel model;
    model.algorithm = j.at("algorithm").get<std::string>();
    algorithm_from_name(model.algorithm);
    model.schema = j.at("schema").get<std::vector<std::string>>();
    model.normalizer = normalizer_from_json(j.at("normalizer"));
    if (model.normalizer.mean.size() != model.schema.size())
      throw ModelFormatError("normalizer does not match schema size");
    const json& p = j.at("params");
    std::string type = p.at("type").get<std::string>();
    if (type == "linear") {
      LinearModel lin;
      lin.w = p.at("w").get<std::vector<double>>();
      if (lin.w.size() != model.schema.size())
        throw ModelFormatError("weight vector does not match schema size");
      model.params = std::move(lin);
    } else if (type == "net") {
      NetModel net;
      net.hidden = p.at("hidden").get<int>();
      net.w1 = p.at("w1").get<std::vector<double>>();
      net.b1 = p.at("b1").get<std::vector<double>>();
      net.w2 = p.at("w2").get<std::vector<double>>();
      net.b2 = p.at("b2").get<double>();
      if (net.hidden < 1 ||
          net.w1.size() != static_cast<std::size_t>(net.hidden) * model.schema.size() ||
          net.b1.size() != static_cast<std::size_t>(net.hidden) ||
          net.w2.size() != static_cast<std::size_t>(net.hidden))
        throw ModelFormatError("network dimensions are inconsistent");
      model.params = std::move(net);
    } else if (type == "boost") {
      BoostModel boost;
      for (const auto& r : p.at("rounds")) {
        BoostModel::Weak weak;
        weak.feature = r.at("feature").get<int>();
        weak.threshold = r.at("threshold").get<double>();
        weak.alpha = r.at("alpha").get<double>();
        if (weak.feature < 0 ||
            static_cast<std::size_t>(weak.feature) >= model.schema.size())
          throw ModelFormatError("weak ranker feature index out of range");
        boost.rounds.push_back(weak);
      }
      model.params = std::move(boost);
    } else {
      throw ModelFormatError("unknown params type '" + type + "'");
    }
    return model;
  } catch (const json::exception& e) {
    throw ModelFormatError("malformed model file " + path + ": " + e.what());
  }
}

}  // namespace readrank
