#ifndef XLNER_PIPELINE_HPP
#define XLNER_PIPELINE_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "xlner/align.hpp"
#include "xlner/config.hpp"
#include "xlner/corpus.hpp"
#include "xlner/distill.hpp"
#include "xlner/embed.hpp"
#include "xlner/metrics.hpp"
#include "xlner/synth.hpp"
#include "xlner/tagger.hpp"

namespace xlner {

// The evaluated configurations: the full system, its loss and teacher
// ablations, and the single-model baselines.
enum class Variant {
  kFull,
  kNoSoft,
  kNoHard,
  kTeacherSrc,
  kTeacherTrans,
  kTeacherOnly,
  kModelTransfer,
  kDataTransfer,
  kDataCombination,
};

Variant parse_variant(const std::string& name);
std::string variant_name(Variant variant);
std::vector<Variant> all_variants();

// Deterministic sub-seeds, one stream per trained model role.
struct RoleSeeds {
  std::uint64_t source = 0;
  std::uint64_t translation = 0;
  std::uint64_t teacher = 0;
  std::uint64_t student = 0;
  std::uint64_t combination = 0;
};
RoleSeeds derive_role_seeds(std::uint64_t run_seed, int ensemble_member = 0);

struct PipelineInputs {
  const LabelSet* label_set = nullptr;
  const std::vector<LabeledSentence>* source_train = nullptr;
  const std::vector<UnlabeledSentence>* target_unlabeled = nullptr;
  const std::vector<LabeledSentence>* target_eval = nullptr;  // optional
  const EmbeddingTable* source_embeddings = nullptr;          // normalized
  const EmbeddingTable* target_embeddings = nullptr;          // normalized
};

struct PipelineParams {
  int csls_k = 10;
  std::optional<std::size_t> max_pairs;
  EncoderConfig encoder;      // embedding_dim is filled from the tables
  TrainConfig teacher_train;  // from-scratch source/translation training
  TrainConfig finetune_train; // teacher fine-tuning on the translated corpus
  DistillConfig distill;
  int ensemble = 1;           // M teacher runs per family
  bool vote_with_viterbi = false;
};

struct PipelineOutcome {
  OrthogonalMapping mapping;
  std::vector<LabeledSentence> pseudo_target_corpus;  // word-translated source data
  std::optional<TaggerModel> model_source;
  std::optional<TaggerModel> model_translation;
  std::optional<TaggerModel> model_teacher;
  std::optional<TaggerModel> student;
  TaggerModel final_model;
  std::vector<std::vector<int>> predictions;  // on the eval corpus
  std::optional<EvalReport> report;
  RoleSeeds seeds;
};

// One end-to-end run of the chosen configuration at one seed. All
// randomness derives from run_seed; identical inputs give bit-identical
// models.
PipelineOutcome run_pipeline(Variant variant, const PipelineInputs& inputs,
                             const PipelineParams& params, std::uint64_t run_seed);

// ---------------------------------------------------------------------------
// Command-level pipeline: file inputs or a generated benchmark, a seed
// list, artifact persistence, and aggregation over runs.

struct PipelineConfig {
  // Input files; unused when the synthetic benchmark is enabled.
  std::string source_corpus_path;
  std::string source_embeddings_path;
  std::string target_embeddings_path;
  std::string target_unlabeled_path;
  std::string target_eval_path;  // optional
  std::string output_dir = "out";

  bool use_synth = false;
  SynthConfig synth;
  std::uint64_t synth_seed = 7;

  std::vector<std::string> entity_types = {"LOC", "MISC", "ORG", "PER"};
  std::optional<int> max_vocab = 200000;
  PipelineParams params;
  std::string variant = "full";
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
};

// Reads the pipeline section of a key=value config; rejects unknown keys.
PipelineConfig parse_pipeline_config(const ConfigMap& config);

struct PipelineCommandResult {
  std::vector<EvalReport> runs;
  std::optional<EvalReport> aggregate;
  std::vector<std::string> written_files;
};

// Executes the configured variant over every seed, writes the mapping, the
// translated corpus, per-seed models and predictions, and the aggregated
// report under output_dir. log receives human-readable progress.
PipelineCommandResult run_pipeline_command(const PipelineConfig& config, std::ostream& log);

}  // namespace xlner

#endif  // XLNER_PIPELINE_HPP
