#pragma once

#include <atomic>
#include <memory>
#include <string>
#include <vector>

#include "csgen/error.hpp"
#include "csgen/net.hpp"
#include "csgen/rng.hpp"
#include "csgen/trace.hpp"
#include "csgen/types.hpp"

namespace csgen {

class GenError : public Error {
 public:
  using Error::Error;
};

/// One text-producing backend. produce() returns raw reply texts (the pool
/// trims, drops empties, caps, and wraps them into Candidates).
class Generator {
 public:
  virtual ~Generator() = default;

  /// Tag recorded in GenCall trace events (model name for remote backends).
  virtual std::string name() const = 0;

  virtual std::vector<std::string> produce(const HsInstance& instance, const Candidate& seed,
                                           int n) = 0;
};

/// Test fixture: each of the n outputs is the first five tokens of the seed
/// followed by one of a fixed cycle of stock phrases. Pure function of its
/// inputs.
class MockGenerator : public Generator {
 public:
  explicit MockGenerator(std::string tag = "mock-gen") : tag_(std::move(tag)) {}

  std::string name() const override { return tag_; }

  std::vector<std::string> produce(const HsInstance& instance, const Candidate& seed,
                                   int n) override;

 private:
  std::string tag_;
};

struct RemoteGeneratorConfig {
  std::string url;
  std::string model_tag;
  std::string prompt_template =
      "Write a counterspeech reply in {language}.\n"
      "Hate speech: {hate_speech}\n"
      "Context: {background}\n"
      "Current draft: {seed}";
  int max_tokens = 256;
  // Field mapping, so chat-completion-shaped endpoints are a config change:
  // request body uses these member names; the reply array is located by JSON
  // pointer, and each element is either the string itself or holds it under
  // reply_text_member.
  std::string prompt_field = "prompt";
  std::string n_field = "n";
  std::string max_tokens_field = "max_tokens";
  std::string reply_texts_pointer = "/texts";
  std::string reply_text_member;
  net::HttpOptions http;
};

/// Generator backed by an HTTP completion service.
/// Default wire format: POST {"prompt":...,"n":...,"max_tokens":...} ->
/// {"texts":[...]}.
class RemoteGenerator : public Generator {
 public:
  explicit RemoteGenerator(RemoteGeneratorConfig config);
  ~RemoteGenerator() override;

  std::string name() const override;

  std::vector<std::string> produce(const HsInstance& instance, const Candidate& seed,
                                   int n) override;

 private:
  RemoteGeneratorConfig config_;
  std::unique_ptr<net::HttpClient> client_;
};

enum class PoolSelection { round_robin, seeded_random };

std::string_view to_string(PoolSelection selection);
std::optional<PoolSelection> parse_pool_selection(std::string_view tag);

/// Owns the backends and produces rewrite Candidates from a seed. Picks a
/// backend per call (strict cyclic order or a seeded draw) and fails over to
/// the remaining backends if the pick errors out; every backend attempt is
/// recorded as a GenCall event. Returns an empty list when every backend
/// failed, or when the serving backend produced no usable text.
class GeneratorPool {
 public:
  GeneratorPool(std::vector<std::unique_ptr<Generator>> backends, PoolSelection selection,
                int n_per_gen, RunTrace* trace = nullptr);

  std::vector<Candidate> generate(const HsInstance& instance, const Candidate& seed, Rng& rng);

  int n_per_gen() const { return n_per_gen_; }
  std::size_t backend_count() const { return backends_.size(); }

 private:
  std::vector<std::unique_ptr<Generator>> backends_;
  PoolSelection selection_;
  int n_per_gen_;
  RunTrace* trace_;
  std::atomic<std::size_t> cursor_{0};
};

}  // namespace csgen
