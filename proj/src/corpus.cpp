#include "ary/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <regex>
#include <set>
#include <thread>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "ary/error.hpp"
#include "ary/text.hpp"

namespace ary {

std::string Sentence::text() const { return join(tokens, " "); }

std::vector<DigitRule> default_digit_rules() {
  return {{'2', "a"}, {'6', "t"}, {'4', "gh"}, {'8', "gh"},
          {'5', "kh"}, {'x', "kh"}, {'9', "q"}};
}

void CleanConfig::validate() const {
  if (!(latin_threshold >= 0.0 && latin_threshold <= 1.0))
    throw InvalidArgument("latin_threshold must be in [0,1]");
  if (max_run < 2) throw InvalidArgument("max_run must be >= 2");
  if (min_tokens < 1) throw InvalidArgument("min_tokens must be >= 1");
  for (const auto& r : digit_rules) {
    if (r.from == '3' || r.from == '7')
      throw InvalidArgument(std::string("digit rule may not map '") + r.from + "'");
  }
}

Corpus::Corpus(std::vector<Sentence> sentences) : sentences_(std::move(sentences)) {
  for (std::size_t s = 0; s < sentences_.size(); ++s) {
    const auto& toks = sentences_[s].tokens;
    for (std::size_t p = 0; p < toks.size(); ++p) {
      ++counts_[toks[p]];
      index_[toks[p]].push_back({s, p});
      ++tokens_;
    }
  }
}

std::size_t Corpus::count(std::string_view word) const {
  auto it = counts_.find(word);
  return it == counts_.end() ? 0 : it->second;
}

const std::vector<Posting>& Corpus::postings(std::string_view word) const {
  static const std::vector<Posting> kEmpty;
  auto it = index_.find(word);
  return it == index_.end() ? kEmpty : it->second;
}

std::string Corpus::fingerprint() const {
  Fnv1a64 h;
  for (const auto& s : sentences_) {
    h.update(s.text());
    h.update("\n");
  }
  return h.hex();
}

bool is_latin_script(std::string_view text, double latin_threshold) {
  std::size_t latin = 0;
  std::size_t letters = 0;
  for (char32_t cp : utf8_decode(text)) {
    if (!is_alphabetic(cp)) continue;
    ++letters;
    if (is_basic_latin_letter(cp)) ++latin;
  }
  if (letters == 0) return false;
  return static_cast<double>(latin) / static_cast<double>(letters) >= latin_threshold;
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// Whole-chunk ASCII emoticons such as ":)", ";-P", "xD", "<3".
const std::regex& emoticon_re() {
  static const std::regex re(
      R"(^(?:[:;=8Xx][-'^o]?[()DPpOo3/\\|\]\[*@$]+|[()\]\[]+[-'^]?[:;=]|<3+|[xX]D+|\^[_.-]?\^|[oO0][_.][oO0])$)");
  return re;
}

bool is_url_start(std::string_view lower, std::size_t i) {
  auto rest = lower.substr(i);
  return rest.starts_with("http://") || rest.starts_with("https://") ||
         rest.starts_with("www.");
}

bool is_handle_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '.';
}

}  // namespace

std::string strip_noise(std::string_view text) {
  // Work chunk by chunk so URL and emoticon detection sees raw characters.
  std::string ascii;
  ascii.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i == start) break;
    const std::string chunk(text.substr(start, i - start));
    if (std::regex_match(chunk, emoticon_re())) {
      ascii.push_back(' ');
      continue;
    }
    std::string lower;
    for (char32_t cp : utf8_decode(chunk)) {
      if (cp < 0x80) {
        char c = static_cast<char>(cp);
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        lower.push_back(c);
      } else {
        lower.push_back(' ');
      }
    }
    std::size_t k = 0;
    while (k < lower.size()) {
      if (is_url_start(lower, k)) {
        // URL runs to the end of the chunk.
        break;
      }
      const char c = lower[k];
      if (c == '@' || c == '#') {
        ++k;
        while (k < lower.size() && is_handle_char(lower[k])) ++k;
        ascii.push_back(' ');
        continue;
      }
      const bool keep = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
      ascii.push_back(keep ? c : ' ');
      ++k;
    }
    ascii.push_back(' ');
  }

  std::string out;
  for (const auto& tok : split_whitespace(ascii)) {
    if (all_digits(tok)) continue;
    if (!out.empty()) out.push_back(' ');
    out += tok;
  }
  return out;
}

std::string collapse_runs(std::string_view token, std::size_t max_run) {
  std::string out;
  out.reserve(token.size());
  std::size_t i = 0;
  while (i < token.size()) {
    std::size_t j = i;
    while (j < token.size() && token[j] == token[i]) ++j;
    const std::size_t run = j - i;
    out.append(run > max_run ? 2 : run, token[i]);
    i = j;
  }
  return out;
}

std::string digits_to_letters(std::string_view token, const std::vector<DigitRule>& rules) {
  std::string out;
  out.reserve(token.size() + 4);
  for (char c : token) {
    auto it = std::find_if(rules.begin(), rules.end(), [c](const DigitRule& r) { return r.from == c; });
    if (it != rules.end() && c != '3' && c != '7')
      out += it->to;
    else
      out.push_back(c);
  }
  return out;
}

std::string clean_token(std::string_view token, const CleanConfig& cfg) {
  std::string t = digits_to_letters(collapse_runs(token, cfg.max_run), cfg.digit_rules);
  std::erase_if(t, [](char c) { return !is_token_char(c); });
  return t;
}

std::vector<std::string> clean_tokens(std::string_view text, const CleanConfig& cfg) {
  std::vector<std::string> out;
  for (const auto& tok : split_whitespace(strip_noise(text))) {
    auto t = clean_token(tok, cfg);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

namespace {

enum class Outcome { kept, non_latin, too_short };

struct Cleaned {
  Outcome outcome = Outcome::kept;
  std::vector<std::string> tokens;
};

Cleaned clean_one(const RawComment& c, const CleanConfig& cfg) {
  Cleaned r;
  if (!is_latin_script(c.text, cfg.latin_threshold)) {
    r.outcome = Outcome::non_latin;
    return r;
  }
  r.tokens = clean_tokens(c.text, cfg);
  if (r.tokens.size() < std::max<std::size_t>(cfg.min_tokens, 2)) {
    r.outcome = Outcome::too_short;
    r.tokens.clear();
  }
  return r;
}

}  // namespace

Corpus clean_corpus(const std::vector<RawComment>& raw, const CleanConfig& cfg, CleanStats* stats) {
  cfg.validate();
  std::vector<Cleaned> cleaned(raw.size());

  unsigned workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(raw.size(), 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < raw.size(); ++i) cleaned[i] = clean_one(raw[i], cfg);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < raw.size(); i += workers) cleaned[i] = clean_one(raw[i], cfg);
      });
    }
  }

  // Sequential assembly keeps output identical to single-threaded cleaning.
  CleanStats st;
  st.input_comments = raw.size();
  std::vector<Sentence> sentences;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto& c = cleaned[i];
    if (c.outcome == Outcome::non_latin) {
      ++st.non_latin;
      continue;
    }
    if (c.outcome == Outcome::too_short) {
      ++st.too_short;
      continue;
    }
    if (!seen.insert(join(c.tokens, " ")).second) {
      ++st.duplicates;
      continue;
    }
    sentences.push_back({std::move(c.tokens), raw[i].id});
  }
  st.kept = sentences.size();
  if (stats) *stats = st;
  return Corpus(std::move(sentences));
}

std::vector<Context> contexts(const Corpus& corpus, std::string_view word, std::size_t limit) {
  if (limit == 0) throw InvalidArgument("contexts: limit must be >= 1");
  std::vector<Context> out;
  for (const auto& p : corpus.postings(word)) {
    if (out.size() >= limit) break;
    out.push_back({&corpus.sentences()[p.sentence], p.position});
  }
  return out;
}

std::vector<RawComment> read_comments(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  const bool jsonl = path.extension() == ".jsonl";
  std::vector<RawComment> out;
  std::set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    RawComment c;
    c.source = path.string();
    if (jsonl) {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), lineno);
      }
      if (!j.is_object() || !j.contains("text") || !j["text"].is_string())
        throw ParseError("record lacks string field 'text'", lineno);
      c.text = j["text"].get<std::string>();
      if (j.contains("id")) {
        const auto& id = j["id"];
        c.id = id.is_string() ? id.get<std::string>() : id.dump();
      } else {
        c.id = "line-" + std::to_string(lineno);
      }
    } else {
      c.id = "line-" + std::to_string(lineno);
      c.text = line;
    }
    if (!ids.insert(c.id).second) throw ParseError("duplicate comment id '" + c.id + "'", lineno);
    out.push_back(std::move(c));
  }
  return out;
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  for (const auto& s : corpus.sentences()) out << s.text() << '\n';
}

Corpus read_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<Sentence> sentences;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = split_whitespace(line);
    if (toks.empty()) continue;
    for (const auto& t : toks) {
      if (!is_valid_token(t)) throw ParseError("invalid token '" + t + "'", lineno);
    }
    sentences.push_back({std::move(toks), "line-" + std::to_string(lineno)});
  }
  return Corpus(std::move(sentences));
}

void write_stats(const Corpus& corpus, const CleanStats& stats, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "sentences\t" << corpus.size() << '\n'
      << "unique_words\t" << corpus.vocab_counts().size() << '\n'
      << "tokens\t" << corpus.token_count() << '\n'
      << "input_comments\t" << stats.input_comments << '\n'
      << "dropped_non_latin\t" << stats.non_latin << '\n'
      << "dropped_too_short\t" << stats.too_short << '\n'
      << "dropped_duplicates\t" << stats.duplicates << '\n';
}

}  // namespace ary
