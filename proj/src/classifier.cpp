#include "tempsweep/classifier.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "tempsweep/errors.hpp"
#include "tempsweep/tokenize.hpp"

namespace tempsweep {

std::vector<Exemplar> load_exemplars(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open exemplars file: " + path.string());

  std::vector<Exemplar> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError("line " + std::to_string(line_no) + ": invalid JSON: " + e.what(),
                       line_no);
    }
    if (!obj.contains("prompt_text") || !obj.contains("ability"))
      throw ParseError("line " + std::to_string(line_no) +
                           ": exemplar needs prompt_text and ability",
                       line_no);
    const auto ability = parse_ability(obj["ability"].get<std::string>());
    if (!ability)
      throw ParseError("line " + std::to_string(line_no) + ": unknown ability code", line_no);
    out.push_back({obj["prompt_text"].get<std::string>(), *ability});
  }
  return out;
}

namespace {

std::map<std::string, int> term_counts(const std::string& text) {
  std::map<std::string, int> counts;
  for (const auto& token : metrics::default_tokenizer().tokenize(text)) ++counts[token];
  return counts;
}

void l2_normalize(std::vector<double>& v) {
  long double ss = 0.0L;
  for (double x : v) ss += static_cast<long double>(x) * x;
  const double norm = static_cast<double>(std::sqrt(ss));
  if (norm > 0.0)
    for (double& x : v) x /= norm;
}

}  // namespace

LocalCentroidClassifier LocalCentroidClassifier::train(std::span<const Exemplar> exemplars) {
  if (exemplars.empty()) throw InvalidInputError("no exemplars to train on");

  LocalCentroidClassifier model;

  // document frequencies over the exemplar corpus
  std::map<std::string, int> df;
  std::vector<std::map<std::string, int>> docs;
  docs.reserve(exemplars.size());
  for (const auto& exemplar : exemplars) {
    docs.push_back(term_counts(exemplar.prompt_text));
    if (docs.back().empty())
      throw InvalidInputError("exemplar tokenizes to nothing: " + exemplar.prompt_text);
    for (const auto& [term, count] : docs.back()) ++df[term];
  }
  for (const auto& [term, count] : df) model.vocab_.emplace(term, model.vocab_.size());

  const double n = static_cast<double>(exemplars.size());
  model.idf_.resize(model.vocab_.size());
  for (const auto& [term, column] : model.vocab_)
    model.idf_[column] = std::log((n + 1.0) / (static_cast<double>(df[term]) + 1.0)) + 1.0;

  std::map<int, int> class_sizes;
  for (std::size_t i = 0; i < exemplars.size(); ++i) {
    const int key = static_cast<int>(exemplars[i].ability);
    auto& centroid = model.centroids_[key];
    centroid.resize(model.vocab_.size());

    std::vector<double> vec(model.vocab_.size(), 0.0);
    for (const auto& [term, count] : docs[i]) {
      const auto column = model.vocab_.at(term);
      vec[column] = static_cast<double>(count) * model.idf_[column];
    }
    l2_normalize(vec);
    for (std::size_t j = 0; j < vec.size(); ++j) centroid[j] += vec[j];
    ++class_sizes[key];
  }
  if (class_sizes.size() < 2)
    throw InvalidInputError("need exemplars for at least two abilities");
  for (auto& [key, centroid] : model.centroids_) l2_normalize(centroid);
  return model;
}

LocalCentroidClassifier LocalCentroidClassifier::train_from_file(
    const std::filesystem::path& path) {
  const auto exemplars = load_exemplars(path);
  return train(exemplars);
}

AbilityPrediction LocalCentroidClassifier::classify(const std::string& prompt) const {
  if (prompt.empty()) throw InvalidInputError("prompt is empty");

  std::vector<double> vec(vocab_.size(), 0.0);
  bool any = false;
  for (const auto& [term, count] : term_counts(prompt)) {
    const auto it = vocab_.find(term);
    if (it == vocab_.end()) continue;
    vec[it->second] = static_cast<double>(count) * idf_[it->second];
    any = true;
  }
  if (!any)
    throw ClassificationError("prompt shares no vocabulary with the training exemplars");
  l2_normalize(vec);

  // cosine against each centroid; everything is unit length already
  double best = -1.0, second = -1.0;
  int best_key = -1;
  for (const auto& [key, centroid] : centroids_) {
    long double dot = 0.0L;
    for (std::size_t j = 0; j < vec.size(); ++j)
      dot += static_cast<long double>(vec[j]) * centroid[j];
    const double sim = static_cast<double>(dot);
    if (sim > best) {
      second = best;
      best = sim;
      best_key = key;
    } else if (sim > second) {
      second = sim;
    }
  }
  if (best <= 0.0)
    throw ClassificationError("prompt matches no ability centroid");

  AbilityPrediction prediction;
  prediction.label = static_cast<Ability>(best_key);
  const double margin = (best - std::max(second, 0.0)) / best;
  prediction.confidence = std::clamp(margin, 0.0, 1.0);
  prediction.source = "local-baseline";
  return prediction;
}

std::string RemoteLlmClassifier::load_template(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open classifier template: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  if (text.find("{prompt}") == std::string::npos)
    throw ParseError("classifier template lacks a {prompt} placeholder: " + path.string());
  return text;
}

RemoteLlmClassifier::RemoteLlmClassifier(ChatClient client, std::string template_text,
                                         std::string model, int parse_retries)
    : client_(std::move(client)),
      template_(std::move(template_text)),
      model_(std::move(model)),
      parse_retries_(parse_retries) {}

AbilityPrediction RemoteLlmClassifier::classify(const std::string& prompt) const {
  if (prompt.empty()) throw InvalidInputError("prompt is empty");

  std::string rendered = template_;
  const std::string needle = "{prompt}";
  std::size_t pos = 0;
  while ((pos = rendered.find(needle, pos)) != std::string::npos) {
    rendered.replace(pos, needle.size(), prompt);
    pos += prompt.size();
  }

  ChatRequest request;
  request.model = model_;
  request.messages = {{"user", rendered}};
  request.temperature = 0.01;
  request.max_tokens = 16;

  for (int attempt = 0; attempt <= parse_retries_; ++attempt) {
    request.seed = 42 + static_cast<std::uint64_t>(attempt);
    const auto reply = client_.complete(request).content;

    // accept exactly one distinct ability code, on word boundaries
    std::optional<Ability> found;
    bool ambiguous = false;
    std::string word;
    const auto flush = [&] {
      if (word.empty()) return;
      if (const auto ability = parse_ability(word)) {
        if (found && *found != *ability) ambiguous = true;
        found = *ability;
      }
      word.clear();
    };
    for (const char c : reply) {
      if (std::isalpha(static_cast<unsigned char>(c)))
        word += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      else
        flush();
    }
    flush();
    if (found && !ambiguous) return {*found, 1.0, "remote-llm"};
  }
  throw ClassificationError("remote reply did not contain exactly one ability code after " +
                            std::to_string(parse_retries_ + 1) + " attempts");
}

}  // namespace tempsweep
