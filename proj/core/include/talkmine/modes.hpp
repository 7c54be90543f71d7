#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "talkmine/preprocess.hpp"

namespace talkmine {

/// Transport mode categories and the keywords that signal a mention.
/// Keywords may span several words ("bike lane").
struct ModeCategoryDictionary {
  std::vector<std::pair<std::string, std::vector<std::string>>> modes;

  /// walking, bicycling, public_transportation, private_car, shared_multimodal.
  static ModeCategoryDictionary defaults();

  std::vector<std::string> mode_names() const;
  /// Throws ConfigError for an empty dictionary or a mode without keywords.
  void validate() const;

  bool operator==(const ModeCategoryDictionary&) const = default;
};

/// One "mode=kw1,kw2,..." line per mode, '#' comments.
ModeCategoryDictionary load_mode_dictionary(const std::filesystem::path& path);

/// Matches keywords against normalized token streams.
class ModeMatcher {
 public:
  ModeMatcher(const ModeCategoryDictionary& dictionary, const NormalizationRules& rules);

  /// Indices (into the dictionary) of every mode mentioned, ascending.
  std::vector<std::size_t> match(std::span<const std::string> normalized_tokens) const;

 private:
  // Per mode, the normalized token sequence of each keyword.
  std::vector<std::vector<std::vector<std::string>>> keywords_;
};

}  // namespace talkmine
