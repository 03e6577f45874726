#include "xlner/pipeline.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace xlner {

namespace {

struct VariantName {
  Variant variant;
  const char* name;
};

constexpr VariantName kVariantNames[] = {
    {Variant::kFull, "full"},
    {Variant::kNoSoft, "no_soft"},
    {Variant::kNoHard, "no_hard"},
    {Variant::kTeacherSrc, "teacher_src"},
    {Variant::kTeacherTrans, "teacher_trans"},
    {Variant::kTeacherOnly, "teacher_only"},
    {Variant::kModelTransfer, "model_transfer"},
    {Variant::kDataTransfer, "data_transfer"},
    {Variant::kDataCombination, "data_combination"},
};

}  // namespace

Variant parse_variant(const std::string& name) {
  for (const auto& entry : kVariantNames) {
    if (name == entry.name) return entry.variant;
  }
  throw ConfigError("unknown pipeline variant: '" + name + "'");
}

std::string variant_name(Variant variant) {
  for (const auto& entry : kVariantNames) {
    if (entry.variant == variant) return entry.name;
  }
  throw ConfigError("unknown pipeline variant id");
}

std::vector<Variant> all_variants() {
  std::vector<Variant> variants;
  for (const auto& entry : kVariantNames) variants.push_back(entry.variant);
  return variants;
}

RoleSeeds derive_role_seeds(std::uint64_t run_seed, int ensemble_member) {
  const std::uint64_t member = static_cast<std::uint64_t>(ensemble_member);
  RoleSeeds seeds;
  seeds.source = mix_seed(mix_seed(run_seed, 0xA1u), member);
  seeds.translation = mix_seed(mix_seed(run_seed, 0xA2u), member);
  seeds.teacher = mix_seed(mix_seed(run_seed, 0xA3u), member);
  seeds.student = mix_seed(run_seed, 0xA4u);
  seeds.combination = mix_seed(run_seed, 0xA5u);
  return seeds;
}

namespace {

std::vector<const TaggerModel*> family_pointers(const std::vector<TaggerModel>& family) {
  std::vector<const TaggerModel*> pointers;
  pointers.reserve(family.size());
  for (const auto& model : family) pointers.push_back(&model);
  return pointers;
}

}  // namespace

PipelineOutcome run_pipeline(Variant variant, const PipelineInputs& inputs,
                             const PipelineParams& params, std::uint64_t run_seed) {
  if (!inputs.label_set || !inputs.source_train || !inputs.target_unlabeled ||
      !inputs.source_embeddings || !inputs.target_embeddings) {
    throw ConfigError("pipeline inputs incomplete");
  }
  if (params.ensemble < 1) throw ConfigError("ensemble size must be >= 1");
  if (inputs.source_embeddings->dim != inputs.target_embeddings->dim) {
    throw ConfigError("source and target embedding dimensions differ");
  }

  PipelineOutcome outcome;
  outcome.seeds = derive_role_seeds(run_seed, 0);

  EncoderConfig encoder = params.encoder;
  encoder.embedding_dim = inputs.source_embeddings->dim;
  encoder.validate();

  SeedDictionary dictionary =
      build_seed_dictionary(*inputs.source_embeddings, *inputs.target_embeddings,
                            params.max_pairs);
  outcome.mapping =
      solve_procrustes(dictionary, *inputs.source_embeddings, *inputs.target_embeddings);

  const EmbeddingSource source_space{inputs.source_embeddings, &outcome.mapping};
  const EmbeddingSource target_space{inputs.target_embeddings, nullptr};
  const LabelSet& label_set = *inputs.label_set;
  const int ensemble = params.ensemble;

  if (variant != Variant::kModelTransfer) {
    TranslationTable table = build_translation_table(
        outcome.mapping, *inputs.source_embeddings, *inputs.target_embeddings, params.csls_k);
    outcome.pseudo_target_corpus = transfer_corpus(*inputs.source_train, table);
  }

  Dataset source_data;
  source_data.add_corpus(*inputs.source_train, source_space);
  Dataset translated_data;
  if (!outcome.pseudo_target_corpus.empty()) {
    translated_data.add_corpus(outcome.pseudo_target_corpus, target_space);
  }

  auto train_source_family = [&](int count) {
    std::vector<TaggerModel> family;
    family.reserve(static_cast<std::size_t>(count));
    for (int m = 0; m < count; ++m) {
      TrainConfig config = params.teacher_train;
      config.seed = derive_role_seeds(run_seed, m).source;
      family.push_back(train_fresh(source_data, encoder, label_set, config));
    }
    return family;
  };
  auto train_translation_family = [&](int count) {
    std::vector<TaggerModel> family;
    family.reserve(static_cast<std::size_t>(count));
    for (int m = 0; m < count; ++m) {
      TrainConfig config = params.teacher_train;
      config.seed = derive_role_seeds(run_seed, m).translation;
      family.push_back(train_fresh(translated_data, encoder, label_set, config));
    }
    return family;
  };
  auto finetune_teacher_family = [&](const std::vector<TaggerModel>& source_family) {
    std::vector<TaggerModel> family;
    family.reserve(source_family.size());
    for (std::size_t m = 0; m < source_family.size(); ++m) {
      TrainConfig config = params.finetune_train;
      config.seed = derive_role_seeds(run_seed, static_cast<int>(m)).teacher;
      family.push_back(finetune(source_family[m], translated_data, config));
    }
    return family;
  };

  auto distill_student = [&](const std::vector<TaggerModel>& teacher_family,
                             const PseudoHardLabels* pseudo, bool use_soft, bool use_hard) {
    DistillConfig config = params.distill;
    config.use_soft = use_soft;
    config.use_hard = use_hard;
    config.student.seed = outcome.seeds.student;
    std::vector<const TaggerModel*> teachers = family_pointers(teacher_family);
    SoftLabelSet soft;
    if (use_soft) {
      soft = soft_labels(*inputs.target_unlabeled, teachers, target_space);
    }
    const TaggerModel* warm = config.warm_start ? &teacher_family.front() : nullptr;
    return train_student(*inputs.target_unlabeled, soft, pseudo, config, encoder, label_set,
                         target_space, warm);
  };

  switch (variant) {
    case Variant::kModelTransfer: {
      std::vector<TaggerModel> source_family = train_source_family(1);
      outcome.model_source = source_family.front();
      outcome.final_model = std::move(source_family.front());
      break;
    }
    case Variant::kDataTransfer: {
      std::vector<TaggerModel> translation_family = train_translation_family(1);
      outcome.model_translation = translation_family.front();
      outcome.final_model = std::move(translation_family.front());
      break;
    }
    case Variant::kTeacherOnly: {
      std::vector<TaggerModel> source_family = train_source_family(1);
      std::vector<TaggerModel> teacher_family = finetune_teacher_family(source_family);
      outcome.model_source = std::move(source_family.front());
      outcome.model_teacher = teacher_family.front();
      outcome.final_model = std::move(teacher_family.front());
      break;
    }
    case Variant::kDataCombination: {
      Dataset combined;
      combined.add_corpus(*inputs.source_train, source_space);
      combined.add_corpus(outcome.pseudo_target_corpus, target_space);
      TrainConfig config = params.teacher_train;
      config.seed = outcome.seeds.combination;
      outcome.final_model = train_fresh(combined, encoder, label_set, config);
      break;
    }
    case Variant::kTeacherSrc: {
      std::vector<TaggerModel> source_family = train_source_family(ensemble);
      outcome.model_source = source_family.front();
      outcome.student = distill_student(source_family, nullptr, true, false);
      outcome.final_model = *outcome.student;
      break;
    }
    case Variant::kTeacherTrans: {
      std::vector<TaggerModel> translation_family = train_translation_family(ensemble);
      outcome.model_translation = translation_family.front();
      outcome.student = distill_student(translation_family, nullptr, true, false);
      outcome.final_model = *outcome.student;
      break;
    }
    case Variant::kNoHard: {
      std::vector<TaggerModel> source_family = train_source_family(ensemble);
      std::vector<TaggerModel> teacher_family = finetune_teacher_family(source_family);
      outcome.model_source = std::move(source_family.front());
      outcome.model_teacher = teacher_family.front();
      outcome.student = distill_student(teacher_family, nullptr, true, false);
      outcome.final_model = *outcome.student;
      break;
    }
    case Variant::kFull:
    case Variant::kNoSoft: {
      std::vector<TaggerModel> source_family = train_source_family(ensemble);
      std::vector<TaggerModel> translation_family = train_translation_family(ensemble);
      std::vector<TaggerModel> teacher_family = finetune_teacher_family(source_family);
      PseudoHardLabels pseudo = vote_hard_labels(
          *inputs.target_unlabeled, family_pointers(source_family),
          family_pointers(teacher_family), family_pointers(translation_family), target_space,
          params.vote_with_viterbi);
      const bool use_soft = variant == Variant::kFull;
      outcome.model_source = std::move(source_family.front());
      outcome.model_translation = std::move(translation_family.front());
      outcome.model_teacher = teacher_family.front();
      outcome.student = distill_student(teacher_family, &pseudo, use_soft, true);
      outcome.final_model = *outcome.student;
      break;
    }
  }

  if (inputs.target_eval && !inputs.target_eval->empty()) {
    outcome.predictions.reserve(inputs.target_eval->size());
    for (const auto& sentence : *inputs.target_eval) {
      outcome.predictions.push_back(
          predict_sequence(sentence.tokens, outcome.final_model, target_space).labels);
    }
    outcome.report = evaluate(*inputs.target_eval, outcome.predictions, label_set);
  }
  return outcome;
}

// ---------------------------------------------------------------------------

PipelineConfig parse_pipeline_config(const ConfigMap& config) {
  static const std::vector<std::string> known = {
      "paths.source_corpus", "paths.source_embeddings", "paths.target_embeddings",
      "paths.target_unlabeled", "paths.target_eval", "paths.output_dir",
      "labels.entity_types",
      "synth.enabled", "synth.seed", "synth.dim", "synth.vocab_size",
      "synth.identical_fraction", "synth.noise", "synth.source_sentences",
      "synth.target_labeled", "synth.target_unlabeled", "synth.min_sentence_length",
      "synth.max_sentence_length", "synth.entity_density", "synth.outside_fraction",
      "synth.role_jitter",
      "align.k", "align.max_vocab", "align.max_pairs",
      "encoder.window", "encoder.hidden_dim", "encoder.dropout",
      "train.epochs", "train.batch_size", "train.learning_rate", "train.weight_decay",
      "train.max_sequence_length",
      "finetune.epochs", "finetune.batch_size", "finetune.learning_rate",
      "finetune.weight_decay", "finetune.max_sequence_length",
      "student.epochs", "student.batch_size", "student.learning_rate",
      "student.weight_decay", "student.max_sequence_length",
      "distill.eta", "distill.use_soft", "distill.use_hard", "distill.warm_start",
      "distill.vote_with_viterbi",
      "pipeline.variant", "pipeline.seeds", "pipeline.ensemble",
  };
  config.check_known(known);

  PipelineConfig result;
  result.source_corpus_path = config.get_string("paths.source_corpus", "");
  result.source_embeddings_path = config.get_string("paths.source_embeddings", "");
  result.target_embeddings_path = config.get_string("paths.target_embeddings", "");
  result.target_unlabeled_path = config.get_string("paths.target_unlabeled", "");
  result.target_eval_path = config.get_string("paths.target_eval", "");
  result.output_dir = config.get_string("paths.output_dir", result.output_dir);

  result.entity_types = config.get_list("labels.entity_types", result.entity_types);

  result.use_synth = config.get_bool("synth.enabled", false);
  result.synth_seed = static_cast<std::uint64_t>(config.get_int("synth.seed", 7));
  result.synth.dim = static_cast<int>(config.get_int("synth.dim", result.synth.dim));
  result.synth.vocab_size =
      static_cast<int>(config.get_int("synth.vocab_size", result.synth.vocab_size));
  result.synth.identical_fraction =
      config.get_double("synth.identical_fraction", result.synth.identical_fraction);
  result.synth.noise = config.get_double("synth.noise", result.synth.noise);
  result.synth.source_sentences =
      static_cast<int>(config.get_int("synth.source_sentences", result.synth.source_sentences));
  result.synth.target_labeled =
      static_cast<int>(config.get_int("synth.target_labeled", result.synth.target_labeled));
  result.synth.target_unlabeled =
      static_cast<int>(config.get_int("synth.target_unlabeled", result.synth.target_unlabeled));
  result.synth.min_sentence_length = static_cast<int>(
      config.get_int("synth.min_sentence_length", result.synth.min_sentence_length));
  result.synth.max_sentence_length = static_cast<int>(
      config.get_int("synth.max_sentence_length", result.synth.max_sentence_length));
  result.synth.entity_density =
      config.get_double("synth.entity_density", result.synth.entity_density);
  result.synth.outside_fraction =
      config.get_double("synth.outside_fraction", result.synth.outside_fraction);
  result.synth.role_jitter = config.get_double("synth.role_jitter", result.synth.role_jitter);
  result.synth.entity_types = result.entity_types;

  result.params.csls_k = static_cast<int>(config.get_int("align.k", result.params.csls_k));
  if (config.has("align.max_vocab") && !config.get_string("align.max_vocab", "").empty()) {
    result.max_vocab = static_cast<int>(config.get_int("align.max_vocab", 0));
  }  // default stays at 200000 per language
  if (config.has("align.max_pairs") && !config.get_string("align.max_pairs", "").empty()) {
    result.params.max_pairs = static_cast<std::size_t>(config.get_int("align.max_pairs", 0));
  }

  result.params.encoder.window =
      static_cast<int>(config.get_int("encoder.window", result.params.encoder.window));
  result.params.encoder.hidden_dim =
      static_cast<int>(config.get_int("encoder.hidden_dim", result.params.encoder.hidden_dim));
  result.params.encoder.dropout_rate =
      config.get_double("encoder.dropout", result.params.encoder.dropout_rate);

  TrainConfig& teacher = result.params.teacher_train;
  teacher.epochs = static_cast<int>(config.get_int("train.epochs", teacher.epochs));
  teacher.batch_size = static_cast<int>(config.get_int("train.batch_size", teacher.batch_size));
  teacher.learning_rate = config.get_double("train.learning_rate", teacher.learning_rate);
  teacher.weight_decay = config.get_double("train.weight_decay", teacher.weight_decay);
  teacher.max_sequence_length =
      static_cast<int>(config.get_int("train.max_sequence_length", teacher.max_sequence_length));

  TrainConfig& tune = result.params.finetune_train;
  tune = teacher;
  tune.epochs = static_cast<int>(config.get_int("finetune.epochs", tune.epochs));
  tune.batch_size = static_cast<int>(config.get_int("finetune.batch_size", tune.batch_size));
  tune.learning_rate = config.get_double("finetune.learning_rate", tune.learning_rate);
  tune.weight_decay = config.get_double("finetune.weight_decay", tune.weight_decay);
  tune.max_sequence_length = static_cast<int>(
      config.get_int("finetune.max_sequence_length", tune.max_sequence_length));

  TrainConfig& student = result.params.distill.student;
  student = teacher;
  student.learning_rate = 1e-3;  // student default is twice the teacher scale
  student.epochs = static_cast<int>(config.get_int("student.epochs", student.epochs));
  student.batch_size = static_cast<int>(config.get_int("student.batch_size", student.batch_size));
  student.learning_rate = config.get_double("student.learning_rate", student.learning_rate);
  student.weight_decay = config.get_double("student.weight_decay", student.weight_decay);
  student.max_sequence_length = static_cast<int>(
      config.get_int("student.max_sequence_length", student.max_sequence_length));

  result.params.distill.eta = config.get_double("distill.eta", result.params.distill.eta);
  result.params.distill.use_soft =
      config.get_bool("distill.use_soft", result.params.distill.use_soft);
  result.params.distill.use_hard =
      config.get_bool("distill.use_hard", result.params.distill.use_hard);
  result.params.distill.warm_start =
      config.get_bool("distill.warm_start", result.params.distill.warm_start);
  result.params.vote_with_viterbi =
      config.get_bool("distill.vote_with_viterbi", result.params.vote_with_viterbi);

  result.variant = config.get_string("pipeline.variant", result.variant);
  result.seeds = config.get_seeds("pipeline.seeds", result.seeds);
  result.params.ensemble =
      static_cast<int>(config.get_int("pipeline.ensemble", result.params.ensemble));

  if (result.seeds.empty()) throw ConfigError("pipeline.seeds must not be empty");
  if (result.variant != "all") parse_variant(result.variant);
  return result;
}

namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& content,
                std::vector<std::string>& written) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path.string());
  out << content;
  if (!out) throw IoError("write failed: " + path.string());
  written.push_back(path.string());
}

struct ResolvedInputs {
  LabelSet label_set;
  std::vector<LabeledSentence> source_train;
  std::vector<UnlabeledSentence> target_unlabeled;
  std::vector<LabeledSentence> target_eval;
  bool has_eval = false;
  EmbeddingTable source_embeddings;
  EmbeddingTable target_embeddings;
};

ResolvedInputs resolve_inputs(const PipelineConfig& config) {
  ResolvedInputs resolved;
  if (config.use_synth) {
    SynthConfig synth = config.synth;
    synth.entity_types = config.entity_types;
    SynthData data = generate_synthetic_bilingual(synth, config.synth_seed);
    resolved.label_set = std::move(data.label_set);
    resolved.source_train = std::move(data.source_train);
    resolved.target_unlabeled = std::move(data.target_unlabeled);
    resolved.target_eval = std::move(data.target_eval);
    resolved.has_eval = !resolved.target_eval.empty();
    resolved.source_embeddings = std::move(data.source_embeddings);
    resolved.target_embeddings = std::move(data.target_embeddings);
    return resolved;
  }

  resolved.label_set = LabelSet::make(config.entity_types);
  auto open = [](const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path);
    return in;
  };
  if (config.source_corpus_path.empty() || config.source_embeddings_path.empty() ||
      config.target_embeddings_path.empty() || config.target_unlabeled_path.empty()) {
    throw ConfigError(
        "pipeline needs paths.source_corpus, paths.source_embeddings, "
        "paths.target_embeddings and paths.target_unlabeled (or synth.enabled=true)");
  }
  {
    auto in = open(config.source_corpus_path);
    resolved.source_train = read_conll(in, resolved.label_set);
  }
  {
    auto in = open(config.target_unlabeled_path);
    resolved.target_unlabeled = read_tokens(in);
  }
  if (!config.target_eval_path.empty()) {
    auto in = open(config.target_eval_path);
    resolved.target_eval = read_conll(in, resolved.label_set);
    resolved.has_eval = true;
  }
  {
    auto in = open(config.source_embeddings_path);
    resolved.source_embeddings = normalize_rows(load_embeddings(in, config.max_vocab));
  }
  {
    auto in = open(config.target_embeddings_path);
    resolved.target_embeddings = normalize_rows(load_embeddings(in, config.max_vocab));
  }
  return resolved;
}

// Per-seed execution of one variant plus artifact persistence. Shared
// artifacts (mapping, alignment report, translated corpus) are written only
// on the first run that produces them.
void run_one_variant(Variant variant, const PipelineConfig& config,
                     const PipelineInputs& inputs, const ResolvedInputs& resolved,
                     const fs::path& out_dir, std::ostream& log, bool& wrote_mapping,
                     bool& wrote_dtrans, PipelineCommandResult& result) {
  const std::string name = variant_name(variant);
  std::vector<EvalReport> reports;
  for (std::size_t i = 0; i < config.seeds.size(); ++i) {
    const std::uint64_t seed = config.seeds[i];
    log << "run " << i + 1 << "/" << config.seeds.size() << " (variant " << name << ", seed "
        << seed << ")\n";
    PipelineOutcome outcome = run_pipeline(variant, inputs, config.params, seed);

    if (!wrote_mapping) {
      std::ostringstream mapping_text;
      write_mapping(mapping_text, outcome.mapping);
      write_file(out_dir / "mapping.txt", mapping_text.str(), result.written_files);

      std::ostringstream align_report;
      align_report << "dictionary_size="
                   << build_seed_dictionary(resolved.source_embeddings,
                                            resolved.target_embeddings, config.params.max_pairs)
                          .size()
                   << '\n';
      align_report << "residual=" << format_double(outcome.mapping.residual) << '\n';
      align_report << "orthogonality_defect="
                   << format_double(outcome.mapping.orthogonality_defect()) << '\n';
      write_file(out_dir / "align_report.txt", align_report.str(), result.written_files);
      wrote_mapping = true;
    }
    if (!wrote_dtrans && !outcome.pseudo_target_corpus.empty()) {
      std::ostringstream dtrans_text;
      write_conll(dtrans_text, outcome.pseudo_target_corpus, resolved.label_set);
      write_file(out_dir / "dtrans.conll", dtrans_text.str(), result.written_files);
      wrote_dtrans = true;
    }

    std::ostringstream model_text;
    save_model(model_text, outcome.final_model);
    write_file(out_dir / ("model_" + name + "_seed" + std::to_string(seed) + ".txt"),
               model_text.str(), result.written_files);

    if (outcome.report) {
      std::vector<LabeledSentence> predicted_sentences;
      predicted_sentences.reserve(outcome.predictions.size());
      for (std::size_t s = 0; s < outcome.predictions.size(); ++s) {
        predicted_sentences.push_back(
            LabeledSentence{resolved.target_eval[s].tokens, outcome.predictions[s]});
      }
      std::ostringstream pred_text;
      write_conll(pred_text, predicted_sentences, resolved.label_set);
      write_file(out_dir / ("pred_" + name + "_seed" + std::to_string(seed) + ".conll"),
                 pred_text.str(), result.written_files);
      reports.push_back(*outcome.report);
      log << "  f1=" << format_double(outcome.report->f1) << "\n";
    }
  }
  result.runs.insert(result.runs.end(), reports.begin(), reports.end());

  if (!reports.empty()) {
    EvalReport aggregate_report = aggregate(reports);
    std::ostringstream report_text;
    report_text << "variant=" << name << '\n';
    report_text << "ensemble=" << config.params.ensemble << '\n';
    report_text << "seeds=";
    for (std::size_t i = 0; i < config.seeds.size(); ++i) {
      if (i) report_text << ',';
      report_text << config.seeds[i];
    }
    report_text << '\n';
    for (std::size_t i = 0; i < config.seeds.size(); ++i) {
      RoleSeeds roles = derive_role_seeds(config.seeds[i], 0);
      report_text << "run." << i + 1 << ".seed=" << config.seeds[i] << '\n';
      report_text << "run." << i + 1 << ".seed.source=" << roles.source << '\n';
      report_text << "run." << i + 1 << ".seed.translation=" << roles.translation << '\n';
      report_text << "run." << i + 1 << ".seed.teacher=" << roles.teacher << '\n';
      report_text << "run." << i + 1 << ".seed.student=" << roles.student << '\n';
    }
    report_text << format_report_kv(aggregate_report);
    write_file(out_dir / ("report_" + name + ".txt"), report_text.str(),
               result.written_files);
    log << format_report_table(aggregate_report);
    result.aggregate = std::move(aggregate_report);
  }
}

}  // namespace

PipelineCommandResult run_pipeline_command(const PipelineConfig& config, std::ostream& log) {
  const bool run_all = config.variant == "all";
  const std::vector<Variant> variants =
      run_all ? all_variants() : std::vector<Variant>{parse_variant(config.variant)};
  ResolvedInputs resolved = resolve_inputs(config);

  PipelineInputs inputs;
  inputs.label_set = &resolved.label_set;
  inputs.source_train = &resolved.source_train;
  inputs.target_unlabeled = &resolved.target_unlabeled;
  inputs.target_eval = resolved.has_eval ? &resolved.target_eval : nullptr;
  inputs.source_embeddings = &resolved.source_embeddings;
  inputs.target_embeddings = &resolved.target_embeddings;

  fs::path out_dir(config.output_dir);
  fs::create_directories(out_dir);

  PipelineCommandResult result;
  bool wrote_mapping = false;
  bool wrote_dtrans = false;
  std::vector<std::pair<std::string, EvalReport>> summary;
  for (Variant variant : variants) {
    run_one_variant(variant, config, inputs, resolved, out_dir, log, wrote_mapping,
                    wrote_dtrans, result);
    if (run_all && result.aggregate) {
      summary.emplace_back(variant_name(variant), *result.aggregate);
    }
  }

  // One summary row per variant when everything ran from one config.
  if (run_all && !summary.empty()) {
    std::ostringstream report_text;
    for (const auto& [name, report] : summary) {
      report_text << "variant." << name << ".mean_f1=" << format_double(report.mean_f1)
                  << '\n';
      report_text << "variant." << name << ".std_f1=" << format_double(report.std_f1) << '\n';
    }
    write_file(out_dir / "report_all.txt", report_text.str(), result.written_files);
    log << "summary (" << summary.size() << " variants):\n";
    for (const auto& [name, report] : summary) {
      char line[96];
      std::snprintf(line, sizeof(line), "  %-18s mean_f1 %.4f  std_f1 %.4f\n", name.c_str(),
                    report.mean_f1, report.std_f1);
      log << line;
    }
  }
  return result;
}

}  // namespace xlner
