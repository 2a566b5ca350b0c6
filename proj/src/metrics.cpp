#include "tempsweep/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_map>

#include "tempsweep/errors.hpp"

namespace tempsweep::metrics {

namespace {

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  // Rolling two-row DP.
  std::vector<std::size_t> prev(b.size() + 1, 0), curr(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      curr[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], curr[j - 1]);
    }
    std::swap(prev, curr);
  }
  return prev[b.size()];
}

// n-grams keyed by joined tokens; US separator cannot occur inside a token.
std::unordered_map<std::string, int> ngram_counts(const std::vector<std::string>& tokens, int n) {
  std::unordered_map<std::string, int> counts;
  if (static_cast<int>(tokens.size()) < n) return counts;
  for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (int j = 1; j < n; ++j) {
      key.push_back('\x1f');
      key.append(tokens[i + static_cast<std::size_t>(j)]);
    }
    ++counts[key];
  }
  return counts;
}

bool is_punct(unsigned char c) { return std::ispunct(c) != 0; }
bool is_space(unsigned char c) { return std::isspace(c) != 0; }

}  // namespace

ScoreResult rouge_l_f1(std::string_view candidate, std::string_view reference,
                       const Tokenizer& tokenizer) {
  const auto cand = tokenizer.tokenize(candidate);
  const auto ref = tokenizer.tokenize(reference);
  if (cand.empty() || ref.empty()) return {0.0, true};

  const double lcs = static_cast<double>(lcs_length(cand, ref));
  if (lcs == 0.0) return {0.0, false};
  const double precision = lcs / static_cast<double>(cand.size());
  const double recall = lcs / static_cast<double>(ref.size());
  return {2.0 * precision * recall / (precision + recall), false};
}

ScoreResult bleu_normalized(std::string_view candidate, std::span<const std::string> references,
                            const Tokenizer& tokenizer, int max_n) {
  if (references.empty()) throw InvalidInputError("bleu requires at least one reference");
  if (max_n < 1) throw InvalidInputError("bleu max_n must be >= 1");

  const auto cand = tokenizer.tokenize(candidate);
  if (cand.empty()) return {0.0, true};

  std::vector<std::vector<std::string>> refs;
  refs.reserve(references.size());
  for (const auto& r : references) refs.push_back(tokenizer.tokenize(r));
  if (std::all_of(refs.begin(), refs.end(), [](const auto& r) { return r.empty(); }))
    return {0.0, true};

  long double log_precision_sum = 0.0L;
  for (int n = 1; n <= max_n; ++n) {
    const auto cand_counts = ngram_counts(cand, n);
    // Clip against the per-reference maximum count.
    std::unordered_map<std::string, int> ref_max;
    for (const auto& ref : refs) {
      for (const auto& [gram, count] : ngram_counts(ref, n)) {
        auto& slot = ref_max[gram];
        slot = std::max(slot, count);
      }
    }
    long double total = 0.0L, matched = 0.0L;
    for (const auto& [gram, count] : cand_counts) {
      total += count;
      const auto it = ref_max.find(gram);
      if (it != ref_max.end()) matched += std::min(count, it->second);
    }
    if (n == 1) {
      if (matched == 0.0L) return {0.0, false};
      log_precision_sum += std::log(matched / total);
    } else {
      log_precision_sum += std::log((matched + 1.0L) / (total + 1.0L));
    }
  }

  // Brevity penalty against the closest reference length, ties to the shorter.
  std::size_t closest = refs.front().size();
  auto gap = [&](std::size_t len) {
    return len > cand.size() ? len - cand.size() : cand.size() - len;
  };
  for (const auto& ref : refs) {
    if (gap(ref.size()) < gap(closest) || (gap(ref.size()) == gap(closest) && ref.size() < closest))
      closest = ref.size();
  }
  const long double brevity =
      cand.size() >= closest ? 1.0L
                             : std::exp(1.0L - static_cast<long double>(closest) /
                                                   static_cast<long double>(cand.size()));
  return {static_cast<double>(brevity * std::exp(log_precision_sum / max_n)), false};
}

std::string normalize_answer(std::string_view text, const NormalizePolicy& policy) {
  std::size_t begin = 0, end = text.size();
  auto strippable = [&](unsigned char c) {
    return (policy.trim && is_space(c)) || (policy.strip_surrounding_punct && is_punct(c));
  };
  while (begin < end && strippable(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && strippable(static_cast<unsigned char>(text[end - 1]))) --end;

  std::string out(text.substr(begin, end - begin));
  if (policy.casefold) {
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

int exact_match_cls(std::string_view candidate, std::string_view gold_label,
                    const NormalizePolicy& policy) {
  if (gold_label.empty()) throw InvalidInputError("gold label is empty");
  return normalize_answer(candidate, policy) == normalize_answer(gold_label, policy) ? 1 : 0;
}

std::size_t modal_choice(std::span<const std::string> choices) {
  if (choices.empty()) throw InvalidInputError("no repetition choices");

  std::unordered_map<std::string, int> counts;
  for (const auto& choice : choices) ++counts[choice];

  // Ties go to the choice seen in the earliest repetition.
  std::size_t winner = 0;
  int best = counts[choices[0]];
  for (std::size_t i = 1; i < choices.size(); ++i) {
    if (counts[choices[i]] > best) {
      best = counts[choices[i]];
      winner = i;
    }
  }
  return winner;
}

int top1_accuracy(std::span<const std::string> per_repetition_choices, std::string_view gold) {
  return per_repetition_choices[modal_choice(per_repetition_choices)] == gold ? 1 : 0;
}

namespace {

double positive_fraction(std::span<const JudgeVerdict> verdicts, const char* what) {
  if (verdicts.empty()) throw InvalidInputError(std::string(what) + ": no verdicts");
  int positive = 0;
  for (const auto& v : verdicts) positive += v.verdict ? 1 : 0;
  return static_cast<double>(positive) / static_cast<double>(verdicts.size());
}

}  // namespace

double drfr(std::span<const JudgeVerdict> verdicts) { return positive_fraction(verdicts, "drfr"); }

double ttcw_accuracy(std::span<const JudgeVerdict> verdicts) {
  return positive_fraction(verdicts, "ttcw_accuracy");
}

}  // namespace tempsweep::metrics
