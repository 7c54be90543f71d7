// talkmine: batch driver for transcript topic and sentiment analysis.
//
//   talkmine run --config study.conf
//   talkmine ingest|topics|sentiment|report --config study.conf [--seed N]
//
// Exit codes: 0 success, 2 configuration error, 3 data error, 4 internal error.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "talkmine/error.hpp"
#include "talkmine/log.hpp"
#include "talkmine/pipeline.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kDataError = 3;
constexpr int kInternalError = 4;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topic and sentiment analysis of focus-group transcripts"};
  app.set_version_flag("--version", std::string(talkmine::kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output;
  std::optional<std::string> format;
  std::string log_level = "warn";
  app.add_option("--config", config_path, "Pipeline config file (key=value)")->required();
  app.add_option("--seed", seed, "Global seed; overrides the config");
  app.add_option("--output", output, "Output directory; overrides the config");
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "json", "both"}));
  app.add_option("--log-level", log_level, "debug, info, warn, error or off");

  auto* ingest = app.add_subcommand("ingest", "Parse transcripts and build the corpus");
  auto* topics = app.add_subcommand("topics", "Fit per-community topic models");
  auto* sentiment = app.add_subcommand("sentiment", "Build the lexicon and train the sentence classifier");
  auto* report = app.add_subcommand("report", "Aggregate scores and write the report");
  auto* run = app.add_subcommand("run", "Run every stage in order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    talkmine::log::set_level(talkmine::log::parse_level(log_level));
    auto config = talkmine::validate_config(config_path);
    if (seed) config.seed = *seed;
    if (output) config.output = *output;
    if (format) config.format = talkmine::parse_report_format(*format);

    talkmine::OutputLock lock(config.output);
    if (run->parsed()) {
      talkmine::run_pipeline(config);
    } else if (ingest->parsed()) {
      talkmine::run_ingest(config);
    } else if (topics->parsed()) {
      talkmine::run_topics(config);
    } else if (sentiment->parsed()) {
      talkmine::run_sentiment(config);
    } else if (report->parsed()) {
      talkmine::run_report(config);
    }
    return kOk;
  } catch (const talkmine::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const talkmine::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
}
