#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "ccnlab/ccn/model.hpp"
#include "ccnlab/harness/config.hpp"
#include "ccnlab/nn/serialize.hpp"

namespace ccnlab {

namespace detail {

inline json save_cdf_net(const std::filesystem::path& dir, const std::string& stem, const CdfNet& net) {
  json parts = json::array();
  int k = 0;
  net.for_each_part([&](const nn::DenseNet& part) {
    const std::string file = stem + "_" + std::to_string(k++) + ".net";
    nn::save_net((dir / file).string(), part);
    parts.push_back(file);
  });
  json j{{"architecture", to_string(net.architecture())}, {"parts", parts}};
  if (net.architecture() == Architecture::monotone) j["components"] = net.as_monotone().components();
  return j;
}

inline CdfNet load_cdf_net(const std::filesystem::path& dir, const json& j) {
  const auto files = j.at("parts").get<std::vector<std::string>>();
  std::vector<nn::DenseNet> parts;
  for (const auto& f : files) parts.push_back(nn::load_net((dir / f).string()));
  if (architecture_from_string(j.at("architecture").get<std::string>()) == Architecture::plain) {
    require(parts.size() == 1, "plain CDF network manifest must list one part");
    return CdfNet::from_plain(std::move(parts.front()));
  }
  require(parts.size() == 3, "monotone CDF network manifest must list three parts");
  const auto& w = parts.front().widths();
  nn::MonotoneNet m(w.front(), j.at("components").get<int>(), w[1], parts.front().hidden_activation());
  std::size_t k = 0;
  m.for_each_part([&](nn::DenseNet& part) {
    require(part.params().size() == parts[k].params().size(), "monotone part size mismatch in saved model");
    part.params() = parts[k++].params();
    part.invalidate();
  });
  return CdfNet::from_monotone(std::move(m));
}

inline std::vector<double> to_vec(const nn::Vector& v) { return {v.data(), v.data() + v.size()}; }

inline nn::Vector from_vec(const std::vector<double>& v) {
  return Eigen::Map<const nn::Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace detail

/// Writes manifest.json plus one binary file per network into `dir`.
inline void save_model(const std::string& dir, const CdfModel& model, const FccnConfig& fccn = FccnConfig::disabled()) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  fs::create_directories(root);
  json manifest{{"format", "ccnlab-model 1"},
                {"architecture", to_string(model.architecture_tag())},
                {"covariate_dim", model.covariate_dim()},
                {"z_range", {{"low", model.sampler.low}, {"high", model.sampler.high},
                             {"padding_fraction", model.sampler.padding_fraction}}},
                {"standardizer", {{"mean", detail::to_vec(model.x_norm.mean)}, {"scale", detail::to_vec(model.x_norm.scale)}}},
                {"use_ps", model.use_ps},
                {"fccn", to_json(fccn)}};
  manifest["g0"] = detail::save_cdf_net(root, "g0", model.g0);
  manifest["g1"] = detail::save_cdf_net(root, "g1", model.g1);
  if (model.representation) {
    const auto& h = *model.representation;
    json heads;
    const std::pair<const char*, const nn::DenseNet*> nets[] = {
        {"phi_w", &h.phi_w}, {"phi_a", &h.phi_a}, {"e_head", &h.e_head}, {"critic", &h.critic}};
    for (const auto& [name, net] : nets) {
      const std::string file = std::string(name) + ".net";
      nn::save_net((root / file).string(), *net);
      heads[name] = file;
    }
    manifest["representation"] = heads;
  }
  std::ofstream out(root / "manifest.json");
  if (!out) throw Error("cannot write model manifest in '" + dir + "'");
  out << manifest.dump(2) << '\n';
}

inline CdfModel load_model(const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  const json manifest = read_json_file((root / "manifest.json").string());
  require(manifest.value("format", "") == "ccnlab-model 1", "'" + dir + "' does not hold a ccnlab model");
  CdfModel m;
  const auto& zr = manifest.at("z_range");
  m.sampler = ZSampler(zr.at("low").get<double>(), zr.at("high").get<double>(), zr.at("padding_fraction").get<double>());
  m.x_norm.mean = detail::from_vec(manifest.at("standardizer").at("mean").get<std::vector<double>>());
  m.x_norm.scale = detail::from_vec(manifest.at("standardizer").at("scale").get<std::vector<double>>());
  require_dims(manifest.at("covariate_dim").get<long>(), m.x_norm.mean.size(), "saved standardizer");
  m.use_ps = manifest.at("use_ps").get<bool>();
  m.g0 = detail::load_cdf_net(root, manifest.at("g0"));
  m.g1 = detail::load_cdf_net(root, manifest.at("g1"));
  if (manifest.contains("representation")) {
    const auto& r = manifest.at("representation");
    FccnHeads h;
    h.phi_w = nn::load_net((root / r.at("phi_w").get<std::string>()).string());
    h.phi_a = nn::load_net((root / r.at("phi_a").get<std::string>()).string());
    h.e_head = nn::load_net((root / r.at("e_head").get<std::string>()).string());
    h.critic = nn::load_net((root / r.at("critic").get<std::string>()).string());
    m.representation = std::move(h);
  }
  return m;
}

}  // namespace ccnlab
