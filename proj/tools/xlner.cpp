// xlner: zero-resource cross-lingual NER via embedding alignment, word-level
// data transfer, and teacher-student distillation on unlabeled text.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "xlner/align.hpp"
#include "xlner/config.hpp"
#include "xlner/corpus.hpp"
#include "xlner/distill.hpp"
#include "xlner/embed.hpp"
#include "xlner/metrics.hpp"
#include "xlner/pipeline.hpp"
#include "xlner/synth.hpp"
#include "xlner/tagger.hpp"

namespace fs = std::filesystem;
using namespace xlner;

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file: " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path);
  return out;
}

EmbeddingTable load_table(const std::string& path, std::optional<int> max_vocab) {
  auto in = open_input(path);
  EmbeddingLoadReport report;
  EmbeddingTable table = normalize_rows(load_embeddings(in, max_vocab, &report));
  if (report.duplicates > 0) {
    std::cerr << "note: " << report.duplicates << " duplicate words ignored in " << path
              << "\n";
  }
  return table;
}

LabelSet label_set_from(const std::string& csv) {
  std::vector<std::string> types;
  for (const auto& part : split_char(csv, ',')) {
    std::string type = trim(part);
    if (!type.empty()) types.push_back(type);
  }
  return LabelSet::make(types);
}

TaggerModel load_model_file(const std::string& path) {
  auto in = open_input(path);
  return load_model(in);
}

struct TrainFlags {
  int epochs = 3;
  int batch_size = 32;
  double learning_rate = 5e-4;
  double weight_decay = 0.0;
  int max_sequence_length = 128;
  std::uint64_t seed = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--epochs", epochs, "Training epochs");
    cmd->add_option("--batch-size", batch_size, "Mini-batch size");
    cmd->add_option("--learning-rate", learning_rate, "Adam learning rate");
    cmd->add_option("--weight-decay", weight_decay, "Decoupled weight decay");
    cmd->add_option("--max-length", max_sequence_length, "Sentence truncation length");
    cmd->add_option("--seed", seed, "Random seed");
  }
  TrainConfig to_config() const {
    TrainConfig config;
    config.epochs = epochs;
    config.batch_size = batch_size;
    config.learning_rate = learning_rate;
    config.weight_decay = weight_decay;
    config.max_sequence_length = max_sequence_length;
    config.seed = seed;
    return config;
  }
};

struct EncoderFlags {
  int window = 1;
  int hidden = 32;
  double dropout = 0.1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--window", window, "Context radius in tokens");
    cmd->add_option("--hidden", hidden, "Hidden layer width");
    cmd->add_option("--dropout", dropout, "Dropout rate during training");
  }
  EncoderConfig to_config(int dim) const {
    EncoderConfig config;
    config.window = window;
    config.hidden_dim = hidden;
    config.dropout_rate = dropout;
    config.embedding_dim = dim;
    return config;
  }
};

void write_report(const std::string& path, const std::string& content) {
  if (path.empty()) return;
  auto out = open_output(path);
  out << content;
}

std::string train_report(const TrainLog& log, std::size_t sentences) {
  std::ostringstream report;
  report << "sentences=" << sentences << '\n';
  report << "epochs=" << log.epoch_losses.size() << '\n';
  for (std::size_t epoch = 0; epoch < log.epoch_losses.size(); ++epoch) {
    report << "epoch." << epoch + 1 << ".loss=" << format_double(log.epoch_losses[epoch])
           << '\n';
  }
  if (!log.epoch_losses.empty()) {
    report << "final_loss=" << format_double(log.epoch_losses.back()) << '\n';
  }
  return report.str();
}

int run_synth(const std::string& out_dir, const std::string& config_path,
              std::uint64_t seed, bool seed_given, const std::string& report_path) {
  SynthConfig config;
  std::uint64_t effective_seed = 7;
  if (!config_path.empty()) {
    ConfigMap map = ConfigMap::from_file(config_path);
    PipelineConfig pipeline = parse_pipeline_config(map);
    config = pipeline.synth;
    config.entity_types = pipeline.entity_types;
    effective_seed = pipeline.synth_seed;
  }
  if (seed_given) effective_seed = seed;

  SynthData data = generate_synthetic_bilingual(config, effective_seed);
  fs::create_directories(out_dir);
  auto path = [&](const char* name) { return (fs::path(out_dir) / name).string(); };
  {
    auto out = open_output(path("src_train.conll"));
    write_conll(out, data.source_train, data.label_set);
  }
  {
    auto out = open_output(path("tgt_eval.conll"));
    write_conll(out, data.target_eval, data.label_set);
  }
  {
    auto out = open_output(path("tgt_unlabeled.txt"));
    write_tokens(out, data.target_unlabeled);
  }
  {
    auto out = open_output(path("dict.tsv"));
    for (const auto& [src, tgt] : data.dictionary) out << src << '\t' << tgt << '\n';
  }
  {
    auto out = open_output(path("src.vec"));
    write_embeddings(out, data.source_embeddings);
  }
  {
    auto out = open_output(path("tgt.vec"));
    write_embeddings(out, data.target_embeddings);
  }
  std::ostringstream report;
  report << "seed=" << effective_seed << '\n';
  report << "vocab_size=" << config.vocab_size << '\n';
  report << "dim=" << config.dim << '\n';
  report << "noise=" << format_double(config.noise) << '\n';
  report << "source_sentences=" << data.source_train.size() << '\n';
  report << "target_labeled=" << data.target_eval.size() << '\n';
  report << "target_unlabeled=" << data.target_unlabeled.size() << '\n';
  report << "dictionary_pairs=" << data.dictionary.size() << '\n';
  write_report(report_path, report.str());
  std::cout << "wrote synthetic benchmark (seed " << effective_seed << ") to " << out_dir
            << "\n";
  return 0;
}

int run_align(const std::string& src_path, const std::string& tgt_path,
              const std::string& out_path, std::optional<int> max_vocab,
              std::optional<std::size_t> max_pairs, const std::string& report_path) {
  EmbeddingTable source = load_table(src_path, max_vocab);
  EmbeddingTable target = load_table(tgt_path, max_vocab);
  SeedDictionary dictionary = build_seed_dictionary(source, target, max_pairs);
  OrthogonalMapping mapping = solve_procrustes(dictionary, source, target);
  {
    auto out = open_output(out_path);
    write_mapping(out, mapping);
  }
  std::ostringstream report;
  report << "dictionary_size=" << dictionary.size() << '\n';
  report << "residual=" << format_double(mapping.residual) << '\n';
  report << "orthogonality_defect=" << format_double(mapping.orthogonality_defect()) << '\n';
  std::cout << report.str();
  if (!report_path.empty()) {
    auto out = open_output(report_path);
    out << report.str();
  }
  return 0;
}

int run_translate(const std::string& mapping_path, const std::string& src_path,
                  const std::string& tgt_path, const std::string& in_path,
                  const std::string& out_path, int k, const std::string& labels_csv,
                  std::optional<int> max_vocab, const std::string& table_path,
                  const std::string& report_path) {
  LabelSet label_set = label_set_from(labels_csv);
  OrthogonalMapping mapping;
  {
    auto in = open_input(mapping_path);
    mapping = read_mapping(in);
  }
  EmbeddingTable source = load_table(src_path, max_vocab);
  EmbeddingTable target = load_table(tgt_path, max_vocab);
  std::vector<LabeledSentence> corpus;
  {
    auto in = open_input(in_path);
    corpus = read_conll(in, label_set);
  }
  TranslationTable table = build_translation_table(mapping, source, target, k);
  std::vector<LabeledSentence> translated = transfer_corpus(corpus, table);
  {
    auto out = open_output(out_path);
    write_conll(out, translated, label_set);
  }
  if (!table_path.empty()) {
    auto out = open_output(table_path);
    write_translation_table_tsv(out, table);
  }
  std::size_t tokens = 0;
  std::size_t passthrough = 0;
  for (const auto& sentence : corpus) {
    tokens += sentence.tokens.size();
    for (const auto& token : sentence.tokens) {
      passthrough += translate_word(token, table).passthrough ? 1 : 0;
    }
  }
  std::ostringstream report;
  report << "sentences=" << translated.size() << '\n';
  report << "tokens=" << tokens << '\n';
  report << "passthrough_tokens=" << passthrough << '\n';
  report << "k=" << k << '\n';
  write_report(report_path, report.str());
  std::cout << "translated " << translated.size() << " sentences\n";
  return 0;
}

int run_train(const std::string& corpus_path, const std::string& emb_path,
              const std::string& mapping_path, const std::string& out_path,
              const std::string& labels_csv, std::optional<int> max_vocab,
              const EncoderFlags& encoder_flags, const TrainFlags& train_flags,
              const std::string& init_path, const std::string& report_path) {
  LabelSet label_set = label_set_from(labels_csv);
  EmbeddingTable table = load_table(emb_path, max_vocab);
  OrthogonalMapping mapping;
  bool has_mapping = false;
  if (!mapping_path.empty()) {
    auto in = open_input(mapping_path);
    mapping = read_mapping(in);
    has_mapping = true;
  }
  std::vector<LabeledSentence> corpus;
  {
    auto in = open_input(corpus_path);
    corpus = read_conll(in, label_set);
  }
  EmbeddingSource source{&table, has_mapping ? &mapping : nullptr};
  Dataset dataset;
  dataset.add_corpus(corpus, source);

  TrainLog log;
  TaggerModel model = [&] {
    if (!init_path.empty()) {
      TaggerModel init = load_model_file(init_path);
      return finetune(init, dataset, train_flags.to_config(), &log);
    }
    return train_fresh(dataset, encoder_flags.to_config(table.dim), label_set,
                       train_flags.to_config(), &log);
  }();
  for (std::size_t epoch = 0; epoch < log.epoch_losses.size(); ++epoch) {
    std::cerr << "epoch " << epoch + 1 << " loss " << format_double(log.epoch_losses[epoch])
              << "\n";
  }
  auto out = open_output(out_path);
  save_model(out, model);
  write_report(report_path, train_report(log, corpus.size()));
  std::cout << "model written to " << out_path << "\n";
  return 0;
}

int run_predict(const std::string& model_path, const std::string& corpus_path,
                const std::string& emb_path, const std::string& out_path,
                std::optional<int> max_vocab, bool use_argmax,
                const std::string& report_path) {
  TaggerModel model = load_model_file(model_path);
  EmbeddingTable table = load_table(emb_path, max_vocab);
  EmbeddingSource source{&table, nullptr};
  std::vector<UnlabeledSentence> corpus;
  {
    auto in = open_input(corpus_path);
    corpus = read_tokens(in);
  }
  auto out = open_output(out_path);
  std::size_t tokens = 0;
  for (const auto& sentence : corpus) {
    std::vector<int> labels =
        use_argmax ? argmax_labels(sentence.tokens, model, source)
                   : predict_sequence(sentence.tokens, model, source).labels;
    for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
      out << sentence.tokens[i] << '\t'
          << model.label_set.labels[static_cast<std::size_t>(labels[i])] << '\n';
    }
    out << '\n';
    tokens += sentence.tokens.size();
  }
  std::ostringstream report;
  report << "sentences=" << corpus.size() << '\n';
  report << "tokens=" << tokens << '\n';
  report << "decoder=" << (use_argmax ? "argmax" : "viterbi") << '\n';
  write_report(report_path, report.str());
  std::cout << "predictions written to " << out_path << "\n";
  return 0;
}

int run_eval(const std::string& gold_path, const std::string& pred_path,
             const std::string& labels_csv, const std::string& report_path) {
  LabelSet label_set = label_set_from(labels_csv);
  std::vector<LabeledSentence> gold;
  {
    auto in = open_input(gold_path);
    gold = read_conll(in, label_set);
  }
  std::vector<LabeledSentence> predicted;
  {
    auto in = open_input(pred_path);
    predicted = read_conll(in, label_set);
  }
  std::vector<std::vector<int>> labels;
  labels.reserve(predicted.size());
  for (const auto& sentence : predicted) labels.push_back(sentence.labels);
  EvalReport report = evaluate(gold, labels, label_set);
  std::cout << format_report_table(report);
  if (!report_path.empty()) {
    auto out = open_output(report_path);
    out << format_report_kv(report);
  }
  return 0;
}

int run_distill(const std::string& unlabeled_path, const std::string& emb_path,
                const std::vector<std::string>& teacher_paths, const std::string& src_model,
                const std::string& teach_model, const std::string& trans_model,
                const std::string& out_path, double eta, bool no_soft, bool no_hard,
                bool vote_viterbi, std::optional<int> max_vocab,
                const std::string& soft_dump, const std::string& hard_dump,
                const TrainFlags& train_flags, const std::string& report_path) {
  EmbeddingTable table = load_table(emb_path, max_vocab);
  EmbeddingSource space{&table, nullptr};
  std::vector<UnlabeledSentence> corpus;
  {
    auto in = open_input(unlabeled_path);
    corpus = read_tokens(in);
  }

  std::vector<TaggerModel> teachers;
  for (const auto& path : teacher_paths) teachers.push_back(load_model_file(path));
  if (teachers.empty()) throw ConfigError("distill needs at least one --teacher model");
  std::vector<const TaggerModel*> teacher_ptrs;
  for (const auto& teacher : teachers) teacher_ptrs.push_back(&teacher);

  DistillConfig config;
  config.eta = eta;
  config.use_soft = !no_soft;
  config.use_hard = !no_hard;
  config.student = train_flags.to_config();

  SoftLabelSet soft;
  if (config.use_soft) {
    soft = soft_labels(corpus, teacher_ptrs, space);
    if (!soft_dump.empty()) {
      auto out = open_output(soft_dump);
      write_soft_labels(out, soft);
    }
  }

  PseudoHardLabels pseudo;
  bool has_pseudo = false;
  if (config.use_hard) {
    if (src_model.empty() || teach_model.empty() || trans_model.empty()) {
      throw ConfigError(
          "the hard loss needs --src-model, --teach-model and --trans-model "
          "(or pass --no-hard)");
    }
    TaggerModel source_voter = load_model_file(src_model);
    TaggerModel teacher_voter = load_model_file(teach_model);
    TaggerModel translation_voter = load_model_file(trans_model);
    const TaggerModel* fa[] = {&source_voter};
    const TaggerModel* fb[] = {&teacher_voter};
    const TaggerModel* fc[] = {&translation_voter};
    pseudo = vote_hard_labels(corpus, fa, fb, fc, space, vote_viterbi);
    has_pseudo = true;
    if (!hard_dump.empty()) {
      auto out = open_output(hard_dump);
      write_pseudo_labels(out, corpus, pseudo, teacher_voter.label_set);
    }
  }

  const TaggerModel& reference = *teacher_ptrs.front();
  TrainLog log;
  TaggerModel student =
      train_student(corpus, soft, has_pseudo ? &pseudo : nullptr, config, reference.encoder,
                    reference.label_set, space, nullptr, &log);
  for (std::size_t epoch = 0; epoch < log.epoch_losses.size(); ++epoch) {
    std::cerr << "epoch " << epoch + 1 << " loss " << format_double(log.epoch_losses[epoch])
              << "\n";
  }
  auto out = open_output(out_path);
  save_model(out, student);

  std::ostringstream report;
  report << train_report(log, corpus.size());
  report << "teachers=" << teachers.size() << '\n';
  report << "eta=" << format_double(config.eta) << '\n';
  report << "soft=" << (config.use_soft ? "true" : "false") << '\n';
  report << "hard=" << (config.use_hard ? "true" : "false") << '\n';
  if (has_pseudo) {
    std::size_t tokens = 0;
    std::size_t labeled = 0;
    for (const auto& sentence : pseudo.sentences) {
      tokens += sentence.size();
      for (int label : sentence) labeled += label != PseudoHardLabels::kAbsent ? 1 : 0;
    }
    report << "voted_tokens=" << labeled << '\n';
    report << "total_tokens=" << tokens << '\n';
  }
  write_report(report_path, report.str());
  std::cout << "student model written to " << out_path << "\n";
  return 0;
}

int run_pipeline_cmd(const std::string& config_path, const std::string& variant,
                     const std::string& seeds_csv, const std::string& out_dir, int ensemble,
                     bool synth) {
  ConfigMap map = config_path.empty() ? ConfigMap() : ConfigMap::from_file(config_path);
  if (!variant.empty()) map.set("pipeline.variant", variant);
  if (!seeds_csv.empty()) map.set("pipeline.seeds", seeds_csv);
  if (ensemble > 0) map.set("pipeline.ensemble", std::to_string(ensemble));
  if (synth) map.set("synth.enabled", "true");
  // Output directory precedence: flag, then environment, then config file.
  if (!out_dir.empty()) {
    map.set("paths.output_dir", out_dir);
  } else if (const char* env = std::getenv("XLNER_OUTPUT_DIR")) {
    map.set("paths.output_dir", env);
  }
  PipelineConfig config = parse_pipeline_config(map);
  run_pipeline_command(config, std::cout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cross-lingual NER: alignment, data transfer, and distillation"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "Generate the synthetic bilingual benchmark");
  std::string synth_out = "synth_out";
  std::string synth_config, synth_report;
  std::uint64_t synth_seed = 7;
  synth->add_option("--out", synth_out, "Output directory");
  synth->add_option("--config", synth_config, "Config file with a synth section");
  auto* synth_seed_opt = synth->add_option("--seed", synth_seed, "Generator seed");
  synth->add_option("--report", synth_report, "Write key=value report here");

  // align
  auto* align = app.add_subcommand("align", "Learn the orthogonal embedding mapping");
  std::string align_src, align_tgt, align_out = "mapping.txt", align_report;
  int align_max_vocab = 200000;
  long long align_max_pairs = -1;
  align->add_option("--src-emb", align_src, "Source embeddings (fastText text)")->required();
  align->add_option("--tgt-emb", align_tgt, "Target embeddings (fastText text)")->required();
  align->add_option("--out", align_out, "Mapping output file");
  align->add_option("--max-vocab", align_max_vocab, "Vocabulary cap per language");
  align->add_option("--max-pairs", align_max_pairs, "Seed dictionary cap");
  align->add_option("--report", align_report, "Write the alignment report here");

  // translate
  auto* translate = app.add_subcommand("translate", "Word-translate a labeled corpus");
  std::string tr_mapping, tr_src, tr_tgt, tr_in, tr_out = "dtrans.conll", tr_table, tr_report;
  std::string tr_labels = "LOC,MISC,ORG,PER";
  int tr_k = 10;
  int tr_max_vocab = 200000;
  translate->add_option("--mapping", tr_mapping, "Mapping file")->required();
  translate->add_option("--src-emb", tr_src, "Source embeddings")->required();
  translate->add_option("--tgt-emb", tr_tgt, "Target embeddings")->required();
  translate->add_option("--in", tr_in, "Labeled source corpus (CoNLL)")->required();
  translate->add_option("--out", tr_out, "Translated corpus output");
  translate->add_option("--k", tr_k, "CSLS neighborhood size");
  translate->add_option("--labels", tr_labels, "Comma-separated entity types");
  translate->add_option("--max-vocab", tr_max_vocab, "Vocabulary cap per language");
  translate->add_option("--export-table", tr_table, "Also export the translation TSV");
  translate->add_option("--report", tr_report, "Write key=value report here");

  // train / finetune
  auto* train_cmd = app.add_subcommand("train", "Train a tagger on a labeled corpus");
  auto* finetune_cmd = app.add_subcommand("finetune", "Fine-tune an existing model");
  std::string fit_corpus, fit_emb, fit_mapping, fit_out = "model.txt", fit_init, fit_report;
  std::string fit_labels = "LOC,MISC,ORG,PER";
  int fit_max_vocab = 200000;
  EncoderFlags encoder_flags;
  TrainFlags train_flags;
  for (CLI::App* cmd : {train_cmd, finetune_cmd}) {
    cmd->add_option("--corpus", fit_corpus, "Labeled corpus (CoNLL)")->required();
    cmd->add_option("--emb", fit_emb, "Embeddings for this corpus language")->required();
    cmd->add_option("--mapping", fit_mapping,
                    "Orthogonal mapping to apply to the embeddings (source-language text)");
    cmd->add_option("--out", fit_out, "Model output file");
    cmd->add_option("--labels", fit_labels, "Comma-separated entity types");
    cmd->add_option("--max-vocab", fit_max_vocab, "Vocabulary cap");
    cmd->add_option("--report", fit_report, "Write key=value report here");
    train_flags.attach(cmd);
  }
  encoder_flags.attach(train_cmd);
  finetune_cmd->add_option("--model", fit_init, "Initial model")->required();

  // predict
  auto* predict = app.add_subcommand("predict", "Tag a token corpus with a trained model");
  std::string pr_model, pr_corpus, pr_emb, pr_out = "pred.conll", pr_report;
  int pr_max_vocab = 200000;
  bool pr_argmax = false;
  predict->add_option("--model", pr_model, "Model file")->required();
  predict->add_option("--corpus", pr_corpus, "Token corpus")->required();
  predict->add_option("--emb", pr_emb, "Embeddings for the corpus language")->required();
  predict->add_option("--out", pr_out, "Predictions output (CoNLL)");
  predict->add_option("--max-vocab", pr_max_vocab, "Vocabulary cap");
  predict->add_flag("--argmax", pr_argmax,
                    "Per-token argmax instead of constrained Viterbi (may break BIO)");
  predict->add_option("--report", pr_report, "Write key=value report here");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Entity-level F1 of predictions vs gold");
  std::string ev_gold, ev_pred, ev_report;
  std::string ev_labels = "LOC,MISC,ORG,PER";
  eval_cmd->add_option("--gold", ev_gold, "Gold corpus (CoNLL)")->required();
  eval_cmd->add_option("--pred", ev_pred, "Predicted corpus (CoNLL)")->required();
  eval_cmd->add_option("--labels", ev_labels, "Comma-separated entity types");
  eval_cmd->add_option("--report", ev_report, "Write key=value report here");

  // distill
  auto* distill = app.add_subcommand("distill", "Train a student from teacher predictions");
  std::string di_unlabeled, di_emb, di_src, di_teach, di_trans, di_out = "student.txt";
  std::string di_soft_dump, di_hard_dump, di_report;
  std::vector<std::string> di_teachers;
  double di_eta = 1.0;
  bool di_no_soft = false, di_no_hard = false, di_vote_viterbi = false;
  int di_max_vocab = 200000;
  TrainFlags student_flags;
  student_flags.learning_rate = 1e-3;
  distill->add_option("--unlabeled", di_unlabeled, "Unlabeled target corpus")->required();
  distill->add_option("--emb", di_emb, "Target embeddings")->required();
  distill->add_option("--teacher", di_teachers,
                      "Teacher model (repeat for an averaged ensemble)")
      ->required();
  distill->add_option("--src-model", di_src, "Voter: source-trained model");
  distill->add_option("--teach-model", di_teach, "Voter: fine-tuned teacher model");
  distill->add_option("--trans-model", di_trans, "Voter: translation-trained model");
  distill->add_option("--out", di_out, "Student model output");
  distill->add_option("--eta", di_eta, "Hard-loss weight");
  distill->add_flag("--no-soft", di_no_soft, "Drop the soft (MSE) loss");
  distill->add_flag("--no-hard", di_no_hard, "Drop the voted hard loss");
  distill->add_flag("--vote-viterbi", di_vote_viterbi, "Vote on Viterbi decodes");
  distill->add_option("--max-vocab", di_max_vocab, "Vocabulary cap");
  distill->add_option("--dump-soft", di_soft_dump, "Persist soft labels (binary)");
  distill->add_option("--dump-hard", di_hard_dump, "Persist pseudo labels (CoNLL, '_')");
  distill->add_option("--report", di_report, "Write key=value report here");
  student_flags.attach(distill);

  // pipeline
  auto* pipeline = app.add_subcommand("pipeline", "Run the full transfer pipeline");
  std::string pl_config, pl_variant, pl_seeds, pl_out;
  int pl_ensemble = 0;
  bool pl_synth = false;
  pipeline->add_option("--config", pl_config, "Pipeline config file (key=value)");
  pipeline->add_option("--variant", pl_variant, "Pipeline variant");
  pipeline->add_option("--seeds", pl_seeds, "Comma-separated run seeds");
  pipeline->add_option("--out", pl_out, "Output directory (overrides XLNER_OUTPUT_DIR)");
  pipeline->add_option("--ensemble", pl_ensemble, "Teacher ensemble size M");
  pipeline->add_flag("--synth", pl_synth, "Use the generated synthetic benchmark as input");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(synth)) {
      return run_synth(synth_out, synth_config, synth_seed, synth_seed_opt->count() > 0,
                       synth_report);
    }
    if (app.got_subcommand(align)) {
      return run_align(align_src, align_tgt, align_out, align_max_vocab,
                       align_max_pairs < 0
                           ? std::nullopt
                           : std::optional<std::size_t>(static_cast<std::size_t>(align_max_pairs)),
                       align_report);
    }
    if (app.got_subcommand(translate)) {
      return run_translate(tr_mapping, tr_src, tr_tgt, tr_in, tr_out, tr_k, tr_labels,
                           tr_max_vocab, tr_table, tr_report);
    }
    if (app.got_subcommand(train_cmd)) {
      return run_train(fit_corpus, fit_emb, fit_mapping, fit_out, fit_labels, fit_max_vocab,
                       encoder_flags, train_flags, "", fit_report);
    }
    if (app.got_subcommand(finetune_cmd)) {
      return run_train(fit_corpus, fit_emb, fit_mapping, fit_out, fit_labels, fit_max_vocab,
                       encoder_flags, train_flags, fit_init, fit_report);
    }
    if (app.got_subcommand(predict)) {
      return run_predict(pr_model, pr_corpus, pr_emb, pr_out, pr_max_vocab, pr_argmax,
                         pr_report);
    }
    if (app.got_subcommand(eval_cmd)) {
      return run_eval(ev_gold, ev_pred, ev_labels, ev_report);
    }
    if (app.got_subcommand(distill)) {
      return run_distill(di_unlabeled, di_emb, di_teachers, di_src, di_teach, di_trans,
                         di_out, di_eta, di_no_soft, di_no_hard, di_vote_viterbi,
                         di_max_vocab, di_soft_dump, di_hard_dump, student_flags, di_report);
    }
    if (app.got_subcommand(pipeline)) {
      return run_pipeline_cmd(pl_config, pl_variant, pl_seeds, pl_out, pl_ensemble, pl_synth);
    }
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
  return 1;
}
