#include "csgen/generate.hpp"

#include <array>
#include <utility>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "csgen/text.hpp"
#include "csgen/tokenize.hpp"

namespace csgen {

namespace {

constexpr std::array<std::string_view, 8> kStockPhrases = {
    "that blanket claim falls apart on the facts",
    "people deserve to be judged as individuals",
    "spreading fear about a whole group helps no one",
    "there is no evidence behind that accusation",
    "most members of this community contribute like anyone else",
    "generalizations like this only fuel division",
    "try talking to the people you are describing",
    "hatred toward a group says nothing about its members",
};

}  // namespace

std::vector<std::string> MockGenerator::produce(const HsInstance&, const Candidate& seed, int n) {
  std::vector<std::string> tokens = tokenize(seed.text);
  std::string head;
  for (std::size_t i = 0; i < tokens.size() && i < 5; ++i) {
    if (!head.empty()) head += ' ';
    head += tokens[i];
  }
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::string text = head;
    if (!text.empty()) text += ' ';
    text += kStockPhrases[static_cast<std::size_t>(i) % kStockPhrases.size()];
    out.push_back(std::move(text));
  }
  return out;
}

RemoteGenerator::RemoteGenerator(RemoteGeneratorConfig config) : config_(std::move(config)) {
  if (config_.url.empty()) throw ConfigError("remote generator endpoint URL is empty");
  client_ = std::make_unique<net::HttpClient>(config_.url, config_.http);
}

RemoteGenerator::~RemoteGenerator() = default;

std::string RemoteGenerator::name() const {
  return config_.model_tag.empty() ? config_.url : config_.model_tag;
}

std::vector<std::string> RemoteGenerator::produce(const HsInstance& instance,
                                                  const Candidate& seed, int n) {
  std::string background;
  for (const std::string& sentence : instance.background) {
    if (!background.empty()) background += ' ';
    background += sentence;
  }
  const std::pair<std::string_view, std::string_view> slots[] = {
      {"{hate_speech}", instance.hate_speech},
      {"{background}", background},
      {"{seed}", seed.text},
      {"{language}", to_string(instance.language)},
  };
  nlohmann::json request;
  request[config_.prompt_field] = render_template(config_.prompt_template, slots);
  request[config_.n_field] = n;
  request[config_.max_tokens_field] = config_.max_tokens;

  net::PostResult response = client_->post_json(request.dump());

  nlohmann::json reply = nlohmann::json::parse(response.body, nullptr, false);
  if (reply.is_discarded()) {
    throw GenError("generator reply is not JSON: " + response.body.substr(0, 200));
  }
  const nlohmann::json* texts = nullptr;
  try {
    texts = &reply.at(nlohmann::json::json_pointer(config_.reply_texts_pointer));
  } catch (const nlohmann::json::exception&) {
    throw GenError("generator reply has no array at " + config_.reply_texts_pointer);
  }
  if (!texts->is_array()) {
    throw GenError("generator reply member " + config_.reply_texts_pointer + " is not an array");
  }
  std::vector<std::string> out;
  for (const auto& entry : *texts) {
    const nlohmann::json* node = &entry;
    if (!config_.reply_text_member.empty()) {
      if (!entry.is_object() || !entry.contains(config_.reply_text_member)) {
        throw GenError("generator reply element lacks member " + config_.reply_text_member);
      }
      node = &entry[config_.reply_text_member];
    }
    if (!node->is_string()) throw GenError("generator reply text is not a string");
    out.push_back(node->get<std::string>());
  }
  return out;
}

std::string_view to_string(PoolSelection selection) {
  return selection == PoolSelection::round_robin ? "round_robin" : "seeded_random";
}

std::optional<PoolSelection> parse_pool_selection(std::string_view tag) {
  if (tag == "round_robin") return PoolSelection::round_robin;
  if (tag == "seeded_random") return PoolSelection::seeded_random;
  return std::nullopt;
}

GeneratorPool::GeneratorPool(std::vector<std::unique_ptr<Generator>> backends,
                             PoolSelection selection, int n_per_gen, RunTrace* trace)
    : backends_(std::move(backends)), selection_(selection), n_per_gen_(n_per_gen), trace_(trace) {
  if (backends_.empty()) throw ConfigError("generator pool has no backends");
  for (const auto& backend : backends_) {
    if (!backend) throw ConfigError("generator pool has a null backend");
  }
  if (n_per_gen_ < 1) throw ConfigError("n_per_gen must be at least 1");
}

std::vector<Candidate> GeneratorPool::generate(const HsInstance& instance, const Candidate& seed,
                                               Rng& rng) {
  if (seed.text.empty()) throw GenError("cannot generate from empty seed text");

  std::size_t start;
  if (selection_ == PoolSelection::round_robin) {
    start = cursor_.fetch_add(1) % backends_.size();
  } else {
    start = static_cast<std::size_t>(rng.next_below(backends_.size()));
  }

  for (std::size_t offset = 0; offset < backends_.size(); ++offset) {
    Generator& backend = *backends_[(start + offset) % backends_.size()];
    GenCallEvent ev;
    ev.instance_id = instance.id;
    ev.parent_key = seed.key();
    ev.backend = backend.name();
    std::vector<std::string> raw;
    try {
      raw = backend.produce(instance, seed, n_per_gen_);
    } catch (const Error& e) {
      spdlog::error("generator backend '{}' failed: {}", backend.name(), e.what());
      ev.ok = false;
      if (trace_) trace_->append(std::move(ev));
      continue;
    }
    std::vector<Candidate> out;
    for (const std::string& text : raw) {
      std::string trimmed = trim_generated(text);
      if (trimmed.empty()) continue;
      if (out.size() == static_cast<std::size_t>(n_per_gen_)) {
        spdlog::warn("generator backend '{}' returned more than {} texts; truncating",
                     backend.name(), n_per_gen_);
        break;
      }
      out.push_back(make_rewrite_candidate(std::move(trimmed), seed));
    }
    ev.produced_count = static_cast<int>(out.size());
    if (trace_) trace_->append(std::move(ev));
    return out;
  }
  spdlog::error("all {} generator backends failed for instance {}; continuing without rewrites",
                backends_.size(), instance.id);
  return {};
}

}  // namespace csgen
