#include "talkmine/modes.hpp"

#include <algorithm>

#include "strutil.hpp"
#include "talkmine/error.hpp"

namespace talkmine {

ModeCategoryDictionary ModeCategoryDictionary::defaults() {
  return {{
      {"walking", {"walk", "pedestrian", "sidewalk", "crosswalk"}},
      {"bicycling", {"bike", "bicycle", "cycling", "cyclist", "bike lane"}},
      {"public_transportation", {"bus", "train", "transit", "rail", "station"}},
      {"private_car", {"car", "driving", "parking", "traffic", "vehicle"}},
      {"shared_multimodal",
       {"uber", "lyft", "divvy", "bikeshare", "rideshare", "ridesourcing", "carshare", "multimodal"}},
  }};
}

std::vector<std::string> ModeCategoryDictionary::mode_names() const {
  std::vector<std::string> names;
  for (const auto& [name, _] : modes) names.push_back(name);
  return names;
}

void ModeCategoryDictionary::validate() const {
  if (modes.empty()) throw ConfigError("mode dictionary is empty");
  for (const auto& [name, keywords] : modes) {
    if (name.empty()) throw ConfigError("mode dictionary has an unnamed mode");
    if (keywords.empty()) throw ConfigError("mode '" + name + "' has no keywords");
  }
}

ModeCategoryDictionary load_mode_dictionary(const std::filesystem::path& path) {
  ModeCategoryDictionary dict;
  std::size_t line_no = 0;
  const std::string content = detail::read_file(path);
  for (auto line : detail::split(content, '\n')) {
    ++line_no;
    line = detail::trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected mode=keyword,...");
    }
    dict.modes.emplace_back(std::string(detail::trim(line.substr(0, eq))), detail::split_list(line.substr(eq + 1)));
  }
  dict.validate();
  return dict;
}

ModeMatcher::ModeMatcher(const ModeCategoryDictionary& dictionary, const NormalizationRules& rules) {
  dictionary.validate();
  for (const auto& [name, keywords] : dictionary.modes) {
    std::vector<std::vector<std::string>> seqs;
    for (const auto& kw : keywords) {
      auto seq = normalized_tokens(kw, rules);
      if (seq.empty()) {
        throw ConfigError("keyword '" + kw + "' of mode '" + name + "' is removed by normalization");
      }
      seqs.push_back(std::move(seq));
    }
    keywords_.push_back(std::move(seqs));
  }
}

std::vector<std::size_t> ModeMatcher::match(std::span<const std::string> tokens) const {
  std::vector<std::size_t> found;
  for (std::size_t m = 0; m < keywords_.size(); ++m) {
    const bool hit = std::any_of(keywords_[m].begin(), keywords_[m].end(), [&](const auto& seq) {
      return std::search(tokens.begin(), tokens.end(), seq.begin(), seq.end()) != tokens.end();
    });
    if (hit) found.push_back(m);
  }
  return found;
}

}  // namespace talkmine
