#include "ary/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "ary/text.hpp"

namespace ary {

std::string to_string(PartOfSpeech p) {
  switch (p) {
    case PartOfSpeech::noun: return "noun";
    case PartOfSpeech::verb: return "verb";
    case PartOfSpeech::adjective: return "adjective";
    case PartOfSpeech::other: return "other";
  }
  return "other";
}

std::string to_string(EntryOrigin o) {
  switch (o) {
    case EntryOrigin::converted: return "converted";
    case EntryOrigin::sm_augmented: return "sm-augmented";
    case EntryOrigin::neologism: return "neologism";
  }
  return "converted";
}

std::optional<PartOfSpeech> parse_pos(std::string_view s) {
  if (s == "noun") return PartOfSpeech::noun;
  if (s == "verb") return PartOfSpeech::verb;
  if (s == "adjective") return PartOfSpeech::adjective;
  if (s == "other") return PartOfSpeech::other;
  return std::nullopt;
}

std::optional<EntryOrigin> parse_origin(std::string_view s) {
  if (s == "converted") return EntryOrigin::converted;
  if (s == "sm-augmented") return EntryOrigin::sm_augmented;
  if (s == "neologism") return EntryOrigin::neologism;
  return std::nullopt;
}

Lexicon::Lexicon(std::vector<LexiconEntry> entries) : entries_(std::move(entries)) {
  for (const auto& e : entries_) {
    if (!is_valid_token(e.canonical))
      throw InvalidArgument("invalid canonical form '" + e.canonical + "'");
  }
  std::stable_sort(entries_.begin(), entries_.end(),
                   [](const LexiconEntry& a, const LexiconEntry& b) { return a.canonical < b.canonical; });
  auto dup = std::adjacent_find(entries_.begin(), entries_.end(),
                                [](const auto& a, const auto& b) { return a.canonical == b.canonical; });
  if (dup != entries_.end()) throw InvalidArgument("duplicate canonical form '" + dup->canonical + "'");
}

const LexiconEntry* Lexicon::find(std::string_view canonical) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), canonical,
                             [](const LexiconEntry& e, std::string_view w) { return e.canonical < w; });
  return (it != entries_.end() && it->canonical == canonical) ? &*it : nullptr;
}

bool Lexicon::contains(std::string_view canonical) const { return find(canonical) != nullptr; }

std::string Lexicon::fingerprint() const { return ary::fingerprint(format_lexicon(*this)); }

// ---------------------------------------------------------------------------
// Adapted-IPA conversion

ConversionError::ConversionError(const std::string& symbol, std::size_t position)
    : Error("unmapped symbol '" + symbol + "' at position " + std::to_string(position)),
      symbol_(symbol),
      position_(position) {}

namespace {

constexpr char32_t kDotBelow = 0x0323;
constexpr char32_t kBreveBelow = 0x032E;
constexpr char32_t kCircumflex = 0x0302;
constexpr char32_t kCaron = 0x030C;
constexpr char32_t kDotAbove = 0x0307;

struct Decomposition {
  char32_t precomposed;
  char32_t base;
  char32_t mark;
};

constexpr Decomposition kDecompositions[] = {
    {0x1E25, U'h', kDotBelow},   {0x1E24, U'H', kDotBelow},   {0x1E0D, U'd', kDotBelow},
    {0x1E0C, U'D', kDotBelow},   {0x1E63, U's', kDotBelow},   {0x1E62, U'S', kDotBelow},
    {0x1E6D, U't', kDotBelow},   {0x1E6C, U'T', kDotBelow},   {0x1E93, U'z', kDotBelow},
    {0x1E92, U'Z', kDotBelow},   {0x1E5B, U'r', kDotBelow},   {0x1E5A, U'R', kDotBelow},
    {0x1E2B, U'h', kBreveBelow}, {0x1E2A, U'H', kBreveBelow}, {0x0161, U's', kCaron},
    {0x0160, U'S', kCaron},      {0x017E, U'z', kCaron},      {0x017D, U'Z', kCaron},
    {0x0159, U'r', kCaron},      {0x0158, U'R', kCaron},      {0x0121, U'g', kDotAbove},
    {0x0120, U'G', kDotAbove},   {0x00E2, U'a', kCircumflex}, {0x00C2, U'A', kCircumflex},
    {0x00EE, U'i', kCircumflex}, {0x00CE, U'I', kCircumflex}, {0x00FB, U'u', kCircumflex},
    {0x00DB, U'U', kCircumflex},
};

int combining_class(char32_t cp) {
  switch (cp) {
    case kDotBelow:
    case kBreveBelow:
      return 220;
    case 0x0300:
    case 0x0301:
    case kCircumflex:
    case 0x0303:
    case 0x0304:
    case kDotAbove:
    case 0x0308:
    case kCaron:
      return 230;
    default:
      return (cp >= 0x0300 && cp <= 0x036F) ? 230 : 0;
  }
}

struct Cluster {
  char32_t base;
  std::vector<char32_t> marks;  // canonical order
  std::size_t position;         // code point index in the caller's input
};

std::vector<Cluster> clusters(std::u32string_view input) {
  std::vector<Cluster> out;
  for (std::size_t i = 0; i < input.size(); ++i) {
    std::u32string d = decompose(input.substr(i, 1));
    for (char32_t cp : d) {
      if (combining_class(cp) != 0 && !out.empty()) {
        out.back().marks.push_back(cp);
      } else {
        out.push_back({cp, {}, i});
      }
    }
  }
  for (auto& c : out) {
    std::stable_sort(c.marks.begin(), c.marks.end(),
                     [](char32_t a, char32_t b) { return combining_class(a) < combining_class(b); });
  }
  return out;
}

bool marks_are(const std::vector<char32_t>& marks, std::initializer_list<char32_t> expected) {
  return std::equal(marks.begin(), marks.end(), expected.begin(), expected.end());
}

bool only_dots_below(const std::vector<char32_t>& marks, std::size_t max) {
  return !marks.empty() && marks.size() <= max &&
         std::all_of(marks.begin(), marks.end(), [](char32_t m) { return m == kDotBelow; });
}

std::optional<std::string> convert_cluster(const Cluster& c) {
  const char32_t base = c.base;
  const auto& m = c.marks;

  if (base == 0x03B5 || base == 0x025B) {  // ε / ɛ, plain or emphatic
    if (m.empty() || only_dots_below(m, 1)) return "3";
    return std::nullopt;
  }
  if (base == 0x0259) return m.empty() ? std::optional<std::string>("e") : std::nullopt;  // ə
  if (base < U'a' || base > U'z') return std::nullopt;

  if (m.empty()) {
    if (base == U'x') return "kh";
    return std::string(1, static_cast<char>(base));
  }
  switch (base) {
    case U'h':
      if (marks_are(m, {kDotBelow})) return "7";
      if (marks_are(m, {kBreveBelow})) return "kh";
      break;
    case U'd':
      if (only_dots_below(m, 2)) return "d";
      break;
    case U't':
      if (only_dots_below(m, 2)) return "t";
      break;
    case U's':
      if (marks_are(m, {kDotBelow})) return "s";
      if (marks_are(m, {kCaron}) || marks_are(m, {kDotBelow, kCaron})) return "ch";
      break;
    case U'z':
      if (only_dots_below(m, 2)) return "z";
      if (marks_are(m, {kCaron})) return "j";
      break;
    case U'g':
      if (marks_are(m, {kDotAbove})) return "gh";
      break;
    case U'r':
      if (marks_are(m, {kDotBelow}) || marks_are(m, {kCaron})) return "r";
      break;
    case U'a':
      if (marks_are(m, {kCircumflex})) return "a";
      break;
    case U'i':
      if (marks_are(m, {kCircumflex})) return "i";
      break;
    case U'u':
      if (marks_are(m, {kCircumflex})) return "ou";
      break;
    default:
      break;
  }
  return std::nullopt;
}

}  // namespace

std::u32string decompose(std::u32string_view s) {
  std::u32string out;
  for (char32_t cp : s) {
    auto it = std::find_if(std::begin(kDecompositions), std::end(kDecompositions),
                           [cp](const Decomposition& d) { return d.precomposed == cp; });
    if (it == std::end(kDecompositions)) {
      out.push_back(cp);
    } else {
      out.push_back(it->base);
      out.push_back(it->mark);
    }
  }
  return out;
}

std::string convert_adapted_ipa(std::string_view word) {
  const auto input = utf8_decode(word);
  std::string out;
  for (const auto& c : clusters(input)) {
    auto piece = convert_cluster(c);
    if (!piece) {
      std::u32string sym(1, c.base);
      sym.insert(sym.end(), c.marks.begin(), c.marks.end());
      throw ConversionError(utf8_encode(sym), c.position);
    }
    out += *piece;
  }
  return out;
}

// ---------------------------------------------------------------------------
// TSV I/O

namespace {

// Shared by parse_lexicon and convert_lexicon. With `convert`, the first
// column is adapted IPA and duplicates after conversion are merged.
Lexicon parse_rows(std::string_view tsv, bool convert, const std::function<void(const std::string&)>& warn) {
  std::vector<LexiconEntry> entries;
  std::map<std::string, std::size_t> first_line;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= tsv.size()) {
    auto nl = tsv.find('\n', pos);
    std::string_view line = tsv.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = (nl == std::string_view::npos) ? tsv.size() + 1 : nl + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    auto cols = split(line, '\t');
    if (cols.size() > 4) throw ParseError("expected at most 4 columns, got " + std::to_string(cols.size()), lineno);
    LexiconEntry e;
    e.canonical = cols[0];
    if (convert) {
      try {
        e.canonical = convert_adapted_ipa(cols[0]);
      } catch (const ConversionError& err) {
        throw ParseError(err.what(), lineno);
      }
    }
    if (!is_valid_token(e.canonical)) {
      auto bad = std::find_if(e.canonical.begin(), e.canonical.end(), [](char c) { return !is_token_char(c); });
      const std::string what = e.canonical.empty()
                                   ? std::string("empty canonical form")
                                   : "invalid character '" + std::string(1, *bad) + "' in '" + e.canonical + "'";
      throw ParseError(what, lineno);
    }
    if (cols.size() > 1 && !cols[1].empty()) {
      e.pos = parse_pos(cols[1]);
      if (!e.pos) throw ParseError("unknown part of speech '" + cols[1] + "'", lineno);
    }
    if (cols.size() > 2) e.gloss = cols[2];
    if (cols.size() > 3 && !cols[3].empty()) {
      auto o = parse_origin(cols[3]);
      if (!o) throw ParseError("unknown origin '" + cols[3] + "'", lineno);
      e.origin = *o;
    }
    auto [it, inserted] = first_line.emplace(e.canonical, lineno);
    if (!inserted) {
      const std::string what = "duplicate canonical '" + e.canonical + "' (lines " + std::to_string(it->second) +
                               " and " + std::to_string(lineno) + ")";
      if (!convert) throw ParseError(what, lineno);
      if (warn) warn(what + ", keeping the first");
      continue;
    }
    entries.push_back(std::move(e));
  }
  return Lexicon(std::move(entries));
}

}  // namespace

Lexicon parse_lexicon(std::string_view tsv) { return parse_rows(tsv, false, {}); }

Lexicon convert_lexicon(std::string_view ipa_tsv, const std::function<void(const std::string&)>& warn) {
  return parse_rows(ipa_tsv, true, warn);
}

std::string format_lexicon(const Lexicon& lexicon) {
  std::string out = "# canonical\tpos\tgloss\torigin\n";
  for (const auto& e : lexicon.entries()) {
    out += e.canonical;
    out += '\t';
    if (e.pos) out += to_string(*e.pos);
    out += '\t';
    out += e.gloss;
    out += '\t';
    out += to_string(e.origin);
    out += '\n';
  }
  return out;
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_lexicon(ss.str());
}

void save_lexicon(const Lexicon& lexicon, const std::filesystem::path& path) {
  for (const auto& e : lexicon.entries()) {
    if (e.gloss.find_first_of("\t\n") != std::string::npos)
      throw InvalidArgument("gloss of '" + e.canonical + "' contains a tab or newline");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << format_lexicon(lexicon);
}

double coverage_in_model(const Lexicon& lexicon, const std::set<std::string, std::less<>>& model_vocab) {
  if (lexicon.empty()) throw InvalidArgument("coverage_in_model: empty lexicon");
  std::size_t hit = 0;
  for (const auto& e : lexicon.entries()) {
    if (model_vocab.contains(e.canonical)) ++hit;
  }
  return static_cast<double>(hit) / static_cast<double>(lexicon.size());
}

}  // namespace ary
