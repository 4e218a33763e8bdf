#include "cliqueloop/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include <Eigen/Geometry>
#include <json.hpp>

#include "cliqueloop/compat_graph.hpp"
#include "cliqueloop/error.hpp"
#include "cliqueloop/parallel.hpp"
#include "cliqueloop/rng.hpp"

namespace cliqueloop {

namespace {

// Box-Muller on the engine's raw output; std::normal_distribution is
// implementation-defined, this is not.
double standard_normal(Rng& rng) {
  double u1 = uniform_unit(rng);
  while (u1 <= 0.0) u1 = uniform_unit(rng);
  const double u2 = uniform_unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double uniform_in(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(rng);
}

Eigen::Vector3d uniform_box(Rng& rng, int dim, double extent) {
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  for (int k = 0; k < dim; ++k) v[k] = uniform_in(rng, -extent, extent);
  return v;
}

RigidTransform draw_transform(Rng& rng, int dim, double extent) {
  if (dim == 2) {
    const double angle = uniform_in(rng, -std::numbers::pi, std::numbers::pi);
    const Eigen::Vector3d t = uniform_box(rng, 2, extent);
    return RigidTransform::planar(angle, t.x(), t.y());
  }
  // Normalized 4D Gaussian -> unit quaternion uniform on S^3 -> Haar on SO(3).
  Eigen::Vector4d g;
  do {
    for (int k = 0; k < 4; ++k) g[k] = standard_normal(rng);
  } while (g.norm() < 1e-12);
  g.normalize();
  const Eigen::Quaterniond q(g[0], g[1], g[2], g[3]);
  const Eigen::Vector3d t = uniform_box(rng, 3, extent);
  return RigidTransform(Eigen::MatrixXd(q.toRotationMatrix()), Eigen::VectorXd(t));
}

std::optional<double> mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::optional<double> median_of(std::vector<double> v) {
  if (v.empty()) return std::nullopt;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double f1_score(double precision, double recall) {
  return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

std::string csv_number(std::optional<double> v) {
  if (!v || std::isnan(*v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", *v);
  return buf;
}

nlohmann::json json_number(std::optional<double> v) {
  if (!v || std::isnan(*v)) return nullptr;
  return *v;
}

}  // namespace

std::vector<std::size_t> Scene::inlier_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < is_inlier.size(); ++i) {
    if (is_inlier[i]) out.push_back(i);
  }
  return out;
}

RigidTransform random_rotation(int dim, std::uint64_t seed, double translation_extent) {
  if (dim != 2 && dim != 3) {
    throw Error(ErrorCode::InvalidSpec, "dimension must be 2 or 3");
  }
  Rng rng(seed);
  return draw_transform(rng, dim, translation_extent > 0.0 ? translation_extent : 0.0);
}

Scene gen_scene(const SceneSpec& spec) {
  if (spec.dim != 2 && spec.dim != 3) {
    throw Error(ErrorCode::InvalidSpec, "dimension must be 2 or 3");
  }
  if (spec.n_inliers + spec.n_outliers == 0) {
    throw Error(ErrorCode::InvalidSpec, "scene needs at least one correspondence");
  }
  if (!(spec.noise_sigma >= 0.0) || !std::isfinite(spec.noise_sigma)) {
    throw Error(ErrorCode::InvalidSpec, "noise sigma must be finite and non-negative");
  }
  if (!(spec.extent > 0.0) || !std::isfinite(spec.extent)) {
    throw Error(ErrorCode::InvalidSpec, "extent must be positive");
  }
  if (spec.transform && spec.transform->dim() != spec.dim) {
    throw Error(ErrorCode::InvalidSpec, "planted transform dimension differs from scene");
  }
  if (spec.n_inliers + spec.n_outliers > kMaxGraphVertices) {
    throw Error(ErrorCode::InvalidSpec, "too many correspondences");
  }

  Rng rng(spec.seed);
  const int dim = spec.dim;
  const RigidTransform truth =
      spec.transform ? *spec.transform : draw_transform(rng, dim, spec.extent);
  const Eigen::Matrix3d& r = truth.embedded_rotation();
  const Eigen::Vector3d& t = truth.embedded_translation();

  struct Pair {
    Eigen::Vector3d m;
    Eigen::Vector3d q;
    bool inlier;
  };
  std::vector<Pair> pairs;
  pairs.reserve(spec.n_inliers + spec.n_outliers);
  for (std::size_t i = 0; i < spec.n_inliers; ++i) {
    const Eigen::Vector3d m = uniform_box(rng, dim, spec.extent);
    Eigen::Vector3d noise = Eigen::Vector3d::Zero();
    for (int k = 0; k < dim; ++k) noise[k] = spec.noise_sigma * standard_normal(rng);
    pairs.push_back({m, r * m + t + noise, true});
  }
  for (std::size_t i = 0; i < spec.n_outliers; ++i) {
    const Eigen::Vector3d m = uniform_box(rng, dim, spec.extent);
    const Eigen::Vector3d u = uniform_box(rng, dim, spec.extent);
    pairs.push_back({m, r * u + t, false});
  }
  for (std::size_t i = pairs.size(); i > 1; --i) {
    std::swap(pairs[i - 1], pairs[uniform_index(rng, i)]);
  }

  Scene scene{NPointSet(dim), NPointSet(dim), CorrespondenceSet(dim), {}, truth};
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    Correspondence c;
    c.m = NPoint::from_embedded(pairs[i].m, dim);
    c.q = NPoint::from_embedded(pairs[i].q, dim);
    c.m_idx = static_cast<std::uint32_t>(i);
    c.q_idx = static_cast<std::uint32_t>(i);
    scene.reference.push_back(c.m);
    scene.query.push_back(c.q);
    scene.correspondences.push_back(c);
    scene.is_inlier.push_back(pairs[i].inlier);
  }
  return scene;
}

TrialOutcome evaluate_trial(const VerificationResult& result, const Scene& scene,
                            std::string method_label) {
  TrialOutcome out;
  out.method = method_label.empty() ? std::string(to_string(result.method))
                                    : std::move(method_label);
  out.accepted = result.accepted;
  out.inlier_count = result.inlier_count;
  out.elapsed_ms = result.elapsed_ms;

  const std::size_t planted = static_cast<std::size_t>(
      std::count(scene.is_inlier.begin(), scene.is_inlier.end(), true));
  const std::size_t reported = result.accepted ? result.inlier_indices.size() : 0;
  std::size_t hits = 0;
  if (result.accepted) {
    for (std::size_t i : result.inlier_indices) hits += scene.is_inlier.at(i) ? 1 : 0;
  }
  if (reported == 0) {
    out.precision = result.accepted ? 0.0 : 1.0;
  } else {
    out.precision = static_cast<double>(hits) / static_cast<double>(reported);
  }
  out.recall = planted == 0 ? 1.0 : static_cast<double>(hits) / static_cast<double>(planted);
  out.f1 = f1_score(out.precision, out.recall);

  if (result.accepted && result.transform) {
    out.rotation_error = rotation_geodesic_error(*result.transform, scene.truth);
    out.translation_error =
        (result.transform->translation() - scene.truth.translation()).norm();
  }
  return out;
}

std::string MethodSpec::label() const {
  return kind == Method::Clique ? "clique" : "ransac-" + std::to_string(iterations);
}

MethodSpec MethodSpec::parse(const std::string& text, int dim) {
  if (text == "clique") return {Method::Clique, 0};
  if (text == "ransac") return {Method::Ransac, kDefaultRansacIterations};
  if (text == "ransac:auto") {
    return {Method::Ransac, ransac_iterations(0.3, 0.999, dim)};
  }
  if (text.rfind("ransac:", 0) == 0) {
    const std::string count = text.substr(7);
    std::size_t used = 0;
    int iterations = 0;
    try {
      iterations = std::stoi(count, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == count.size() && iterations >= 1) return {Method::Ransac, iterations};
  }
  throw Error(ErrorCode::InvalidGrid, "unknown method '" + text + "'");
}

std::vector<MethodSpec> default_methods(int dim) {
  return {MethodSpec::parse("clique", dim), MethodSpec::parse("ransac", dim),
          MethodSpec::parse("ransac:auto", dim)};
}

SweepReport run_sweep(const SweepConfig& config,
                      const std::function<void(std::size_t, std::size_t)>& progress) {
  if (config.outlier_ratios.empty() || config.sigmas.empty() || config.methods.empty()) {
    throw Error(ErrorCode::InvalidGrid, "grid needs ratios, sigmas and methods");
  }
  if (config.trials == 0 || config.correspondences == 0) {
    throw Error(ErrorCode::InvalidGrid, "trials and correspondences must be positive");
  }
  if (config.dim != 2 && config.dim != 3) {
    throw Error(ErrorCode::InvalidGrid, "dimension must be 2 or 3");
  }
  for (double ratio : config.outlier_ratios) {
    if (!(ratio >= 0.0 && ratio <= 1.0)) {
      throw Error(ErrorCode::InvalidGrid, "outlier ratios must lie in [0, 1]");
    }
  }
  for (double sigma : config.sigmas) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
      throw Error(ErrorCode::InvalidGrid, "sigmas must be finite and non-negative");
    }
  }
  if (!(config.epsilon > 0.0)) {
    throw Error(ErrorCode::InvalidGrid, "epsilon must be positive");
  }

  VerificationParams vparams;
  vparams.epsilon = config.epsilon;
  vparams.min_inliers = config.min_inliers;
  vparams.record_timing = config.record_timing;

  SweepReport report{config, {}};
  const std::size_t total_cells = config.outlier_ratios.size() * config.sigmas.size();
  std::size_t done = 0;
  for (std::size_t ri = 0; ri < config.outlier_ratios.size(); ++ri) {
    for (std::size_t si = 0; si < config.sigmas.size(); ++si) {
      const double ratio = config.outlier_ratios[ri];
      const double sigma = config.sigmas[si];
      const auto n_outliers = static_cast<std::size_t>(
          std::llround(static_cast<double>(config.correspondences) * ratio));

      // outcomes[trial][method]
      std::vector<std::vector<TrialOutcome>> outcomes(config.trials);
      parallel_for(config.trials, config.threads, [&](std::size_t trial) {
        SceneSpec spec;
        spec.dim = config.dim;
        spec.n_outliers = n_outliers;
        spec.n_inliers = config.correspondences - n_outliers;
        spec.noise_sigma = sigma;
        spec.extent = config.extent;
        spec.seed = derive_seed(config.seed, {ri, si, trial});
        const Scene scene = gen_scene(spec);

        auto& row = outcomes[trial];
        for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
          const MethodSpec& method = config.methods[mi];
          VerificationResult result;
          if (method.kind == Method::Clique) {
            result = verify_clique(scene.correspondences, vparams);
          } else if (scene.correspondences.size() <
                     static_cast<std::size_t>(config.dim)) {
            result.method = Method::Ransac;
            result.diagnostic = "too_few_correspondences";
          } else {
            RansacParams rp;
            rp.iterations = method.iterations;
            rp.inlier_tol = config.ransac_inlier_tol.value_or(config.epsilon);
            rp.seed = derive_seed(config.seed, {ri, si, trial, 1000 + mi});
            result = verify_ransac(scene.correspondences, rp, vparams);
          }
          row.push_back(evaluate_trial(result, scene, method.label()));
        }
      });

      for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
        CellSummary cell;
        cell.outlier_ratio = ratio;
        cell.sigma = sigma;
        cell.method = config.methods[mi].label();
        cell.trials = config.trials;
        std::vector<double> rot;
        std::vector<double> trans;
        double accepted = 0.0;
        double precision = 0.0;
        double recall = 0.0;
        double time_ms = 0.0;
        for (std::size_t trial = 0; trial < config.trials; ++trial) {
          const TrialOutcome& o = outcomes[trial][mi];
          accepted += o.accepted ? 1.0 : 0.0;
          precision += o.precision;
          recall += o.recall;
          time_ms += o.elapsed_ms;
          if (o.rotation_error) rot.push_back(*o.rotation_error);
          if (o.translation_error) trans.push_back(*o.translation_error);
          cell.outcomes.push_back(o);
        }
        const auto count = static_cast<double>(config.trials);
        cell.accept_rate = accepted / count;
        cell.precision = precision / count;
        cell.recall = recall / count;
        cell.f1 = f1_score(cell.precision, cell.recall);
        cell.time_ms_mean = time_ms / count;
        cell.rot_err_mean = mean_of(rot);
        cell.rot_err_median = median_of(rot);
        cell.trans_err_mean = mean_of(trans);
        cell.trans_err_median = median_of(trans);
        report.cells.push_back(std::move(cell));
      }
      ++done;
      if (progress) progress(done, total_cells);
    }
  }
  return report;
}

void write_report_csv(std::ostream& out, const SweepReport& report) {
  out << kReportCsvHeader << '\n';
  for (const auto& c : report.cells) {
    out << csv_number(c.outlier_ratio) << ',' << csv_number(c.sigma) << ',' << c.method
        << ',' << csv_number(c.accept_rate) << ',' << csv_number(c.rot_err_mean) << ','
        << csv_number(c.trans_err_mean) << ',' << csv_number(c.precision) << ','
        << csv_number(c.recall) << ',' << csv_number(c.f1) << ','
        << csv_number(c.time_ms_mean) << '\n';
  }
}

void write_report_json(std::ostream& out, const SweepReport& report, bool verbose) {
  const SweepConfig& cfg = report.config;
  nlohmann::ordered_json doc;
  nlohmann::ordered_json methods = nlohmann::ordered_json::array();
  for (const auto& m : cfg.methods) methods.push_back(m.label());
  doc["config"] = {{"outlier_ratios", cfg.outlier_ratios},
                   {"sigmas", cfg.sigmas},
                   {"methods", methods},
                   {"trials", cfg.trials},
                   {"correspondences", cfg.correspondences},
                   {"dim", cfg.dim},
                   {"epsilon", cfg.epsilon},
                   {"extent", cfg.extent},
                   {"seed", cfg.seed}};
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (const auto& c : report.cells) {
    nlohmann::ordered_json cell = {
        {"outlier_ratio", c.outlier_ratio},
        {"sigma", c.sigma},
        {"method", c.method},
        {"trials", c.trials},
        {"accept_rate", c.accept_rate},
        {"rot_err_mean_rad", json_number(c.rot_err_mean)},
        {"rot_err_median_rad", json_number(c.rot_err_median)},
        {"trans_err_mean_m", json_number(c.trans_err_mean)},
        {"trans_err_median_m", json_number(c.trans_err_median)},
        {"precision", c.precision},
        {"recall", c.recall},
        {"f1", c.f1},
        {"time_ms_mean", c.time_ms_mean}};
    if (verbose) {
      nlohmann::ordered_json trials = nlohmann::ordered_json::array();
      for (const auto& o : c.outcomes) {
        trials.push_back({{"accepted", o.accepted},
                          {"inlier_count", o.inlier_count},
                          {"rotation_error_rad", json_number(o.rotation_error)},
                          {"translation_error_m", json_number(o.translation_error)},
                          {"precision", o.precision},
                          {"recall", o.recall},
                          {"f1", o.f1},
                          {"elapsed_ms", o.elapsed_ms}});
      }
      cell["trials_detail"] = std::move(trials);
    }
    cells.push_back(std::move(cell));
  }
  doc["cells"] = std::move(cells);
  out << doc.dump(2) << '\n';
}

}  // namespace cliqueloop
