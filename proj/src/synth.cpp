#include "ary/synth.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include "ary/error.hpp"
#include "ary/simscore.hpp"
#include "ary/text.hpp"

namespace ary {

void SynthConfig::validate() const {
  if (canonicals == 0) throw InvalidArgument("synth: canonicals must be positive");
  if (min_variants == 0 || min_variants > max_variants) throw InvalidArgument("synth: bad variant range");
  if (frames_per_group < 2) throw InvalidArgument("synth: frames_per_group must be at least 2");
  if (context_words_per_group < 4) throw InvalidArgument("synth: context_words_per_group must be at least 4");
  if (fillers < 2) throw InvalidArgument("synth: fillers must be at least 2");
  if (!std::is_sorted(sweep_bands.begin(), sweep_bands.end())) throw InvalidArgument("synth: sweep_bands must be sorted");
}

namespace {

using Units = std::vector<std::string>;

// Common letters appear twice to weight the draw.
const std::vector<std::string> kConsonants{"b", "d", "f", "g", "h", "j", "k", "l", "m", "n", "q", "r", "s",
                                           "t", "w", "z", "ch", "kh", "gh", "3", "7", "b", "d", "k", "l",
                                           "m", "n", "r", "s", "t"};
const std::vector<std::string> kVowels{"a", "a", "i", "ou", "e", "o"};

bool is_vowel_unit(const std::string& u) { return u == "a" || u == "e" || u == "i" || u == "o" || u == "u" || u == "ou"; }

std::string join_units(const Units& u) {
  std::string s;
  for (const auto& x : u) s += x;
  return s;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }
  bool chance(double p) { return static_cast<double>(gen_() >> 11) * 0x1.0p-53 < p; }
  template <class T>
  const T& pick(const std::vector<T>& v) { return v[below(v.size())]; }
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 gen_;
};

Units random_word(Rng& rng, std::size_t min_syll, std::size_t max_syll) {
  Units u;
  const std::size_t syll = min_syll + rng.below(max_syll - min_syll + 1);
  for (std::size_t s = 0; s < syll; ++s) {
    u.push_back(rng.pick(kConsonants));
    u.push_back(rng.pick(kVowels));
    if (rng.chance(0.25)) u.push_back(rng.pick(kConsonants));
  }
  if (is_vowel_unit(u.back()) && rng.chance(0.5)) u.push_back(rng.pick(kConsonants));
  return u;
}

double skel(std::string_view a, std::string_view b) { return score(a, b, ScoreKind::seqmatch_skeleton); }

bool stable(const std::string& w) {
  return is_valid_token(w) && clean_token(w, CleanConfig{}) == w;
}

struct Group {
  std::string canonical;
  Units units;
  std::vector<PlantedVariant> variants;
  std::vector<std::size_t> rare;  // indexes into variants planted once
  std::vector<std::string> context;
  std::string distractor;
  std::vector<Units> frames;  // one empty unit marks the slot
};

// Single-letter consonant positions usable for gemination.
std::vector<std::size_t> geminable(const Units& u) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < u.size(); ++i) {
    if (u[i].size() != 1 || is_vowel_unit(u[i]) || u[i] == "3" || u[i] == "7") continue;
    if (!is_vowel_unit(u[i + 1]) || u[i - 1] == u[i]) continue;
    out.push_back(i);
  }
  return out;
}

struct Shift {
  const char* from;
  const char* to;  // "" deletes the unit
  const char* phenomenon;
};

const std::vector<Shift> kShifts{
    {"7", "h", "digit-substitution"},  {"3", "", "digit-substitution"},   {"3", "a", "digit-substitution"},
    {"q", "k", "consonant-shift"},     {"q", "g", "consonant-shift"},     {"gh", "g", "consonant-shift"},
    {"kh", "k", "consonant-shift"},    {"kh", "h", "consonant-shift"},    {"d", "t", "consonant-shift"},
    {"t", "d", "consonant-shift"},     {"z", "s", "consonant-shift"},     {"s", "z", "consonant-shift"},
    {"j", "g", "consonant-shift"},     {"ch", "sh", "consonant-shift"},   {"b", "p", "consonant-shift"},
    {"w", "ou", "consonant-shift"},    {"k", "q", "consonant-shift"},     {"h", "7", "digit-substitution"},
};

std::optional<std::pair<Units, std::string>> random_variant(Rng& rng, const Units& u) {
  switch (rng.below(11)) {
    case 0: case 1: case 2: {  // vowel change
      std::vector<std::size_t> at;
      for (std::size_t i = 0; i < u.size(); ++i)
        if (is_vowel_unit(u[i])) at.push_back(i);
      if (at.empty()) return std::nullopt;
      static const std::map<std::string, std::vector<std::string>> swaps{
          {"a", {"e"}}, {"e", {"a", "i"}}, {"i", {"e"}}, {"ou", {"o", "u"}}, {"o", {"ou", "u"}}, {"u", {"ou"}}};
      Units v = u;
      const auto i = rng.pick(at);
      v[i] = rng.pick(swaps.at(v[i]));
      return std::pair{v, std::string("vowel-change")};
    }
    case 3: case 4: {  // vowel omission
      std::vector<std::size_t> at;
      for (std::size_t i = 0; i < u.size(); ++i)
        if (is_vowel_unit(u[i])) at.push_back(i);
      if (at.size() < 2) return std::nullopt;
      Units v = u;
      v.erase(v.begin() + static_cast<std::ptrdiff_t>(rng.pick(at)));
      return std::pair{v, std::string("vowel-drop")};
    }
    case 5: {  // trailing vowel
      if (is_vowel_unit(u.back())) return std::nullopt;
      Units v = u;
      v.push_back("e");
      return std::pair{v, std::string("vowel-add")};
    }
    case 6: case 7: {
      const auto at = geminable(u);
      if (at.empty()) return std::nullopt;
      Units v = u;
      const auto i = rng.pick(at);
      v.insert(v.begin() + static_cast<std::ptrdiff_t>(i), v[i]);
      return std::pair{v, std::string("gemination")};
    }
    case 8: case 9: {
      for (std::size_t i = 0; i + 1 < u.size(); ++i) {
        if (u[i] == u[i + 1] && !is_vowel_unit(u[i])) {
          Units v = u;
          v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
          return std::pair{v, std::string("degemination")};
        }
      }
      return std::nullopt;
    }
    default: {
      std::vector<std::pair<std::size_t, const Shift*>> at;
      for (std::size_t i = 0; i < u.size(); ++i)
        for (const auto& s : kShifts)
          if (u[i] == s.from) at.emplace_back(i, &s);
      if (at.empty()) return std::nullopt;
      const auto [i, s] = rng.pick(at);
      Units v = u;
      if (*s->to) v[i] = s->to;
      else v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
      return std::pair{v, std::string(s->phenomenon)};
    }
  }
}

// Every single and double consonant change of `u` (replacement by another
// consonant, or deletion), in a fixed order.
std::vector<std::pair<Units, std::string>> all_shifts(const Units& u) {
  std::vector<std::string> letters(kConsonants.begin(), kConsonants.end());
  std::sort(letters.begin(), letters.end());
  letters.erase(std::unique(letters.begin(), letters.end()), letters.end());
  auto singles = [&](const Units& w, std::size_t from) {
    std::vector<std::pair<Units, std::size_t>> out;  // variant, next position
    for (std::size_t i = from; i < w.size(); ++i) {
      if (is_vowel_unit(w[i])) continue;
      Units del = w;
      del.erase(del.begin() + static_cast<std::ptrdiff_t>(i));
      out.emplace_back(std::move(del), i);
      for (const auto& c : letters) {
        if (c == w[i]) continue;
        Units v = w;
        v[i] = c;
        out.emplace_back(std::move(v), i + 1);
      }
    }
    return out;
  };
  std::vector<std::pair<Units, std::string>> out;
  for (auto& [once, next] : singles(u, 0)) {
    for (auto& [twice, unused] : singles(once, next)) out.emplace_back(std::move(twice), "consonant-shift");
    out.emplace_back(std::move(once), "consonant-shift");
  }
  return out;
}

// Arabizi digit spelling of a clean word, if it has a unit with one.
std::optional<std::string> digit_spelling(Rng& rng, const Units& u) {
  static const std::map<std::string, std::vector<std::string>> digits{
      {"kh", {"5", "x"}}, {"gh", {"4", "8"}}, {"q", {"9"}}, {"t", {"6"}}};
  std::vector<std::size_t> at;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (digits.contains(u[i])) at.push_back(i);
  if (at.empty()) return std::nullopt;
  Units v = u;
  const auto i = rng.pick(at);
  v[i] = rng.pick(digits.at(v[i]));
  return join_units(v);
}

std::string decorate(Rng& rng, std::string sentence) {
  if (rng.chance(0.2)) sentence[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(sentence[0])));
  if (rng.chance(0.15)) sentence += "!!";
  if (rng.chance(0.1)) sentence += " :)";
  if (rng.chance(0.1)) sentence += " #maroc";
  if (rng.chance(0.05)) sentence = "https://youtu.be/x1y2 " + sentence;
  return sentence;
}

}  // namespace

SynthCorpus generate_synthetic(const SynthConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  std::set<std::string> used;
  std::vector<Group> groups;

  auto fresh = [&](const std::string& w) { return stable(w) && !used.contains(w); };

  // Canonicals, pairwise apart.
  for (std::size_t tries = 0; groups.size() < cfg.canonicals; ++tries) {
    if (tries > 200000) throw Error("synth: could not place canonicals; lower the count or raise the separation");
    auto u = random_word(rng, 2, 3);
    if (rng.chance(0.25)) {
      const auto at = geminable(u);
      if (!at.empty()) {
        const auto i = rng.pick(at);
        u.insert(u.begin() + static_cast<std::ptrdiff_t>(i), u[i]);
      }
    }
    const auto w = join_units(u);
    if (!fresh(w) || w.size() < 4) continue;
    if (std::any_of(groups.begin(), groups.end(), [&](const Group& g) { return skel(w, g.canonical) >= cfg.group_separation; }))
      continue;
    used.insert(w);
    groups.push_back(Group{w, u, {}, {}, {}, {}, {}});
  }

  auto apart_from_others = [&](const std::string& v, std::size_t gi) {
    for (std::size_t h = 0; h < groups.size(); ++h)
      if (h != gi && skel(v, groups[h].canonical) >= cfg.group_separation) return false;
    return true;
  };
  auto make_variant = [&](const std::string& form, std::size_t gi, const std::string& phenomenon) {
    const auto& c = groups[gi].canonical;
    PlantedVariant v;
    v.form = form;
    v.canonical = c;
    v.phenomenon = phenomenon;
    v.skeleton_equal = skeletonize(form) == skeletonize(c);
    v.skeleton_score = skel(form, c);
    return v;
  };

  // Variants; one slot per group stays free for the sweep bands.
  const std::size_t random_max = std::max(cfg.min_variants, cfg.max_variants - 1);
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    auto& g = groups[gi];
    const std::size_t want = cfg.min_variants + rng.below(random_max - cfg.min_variants + 1);
    for (std::size_t tries = 0; g.variants.size() < want && tries < 500; ++tries) {
      auto cand = random_variant(rng, g.units);
      if (!cand) continue;
      const auto form = join_units(cand->first);
      if (!fresh(form) || !apart_from_others(form, gi)) continue;
      used.insert(form);
      g.variants.push_back(make_variant(form, gi, cand->second));
    }
    if (gi % 5 == 0 && !g.variants.empty()) g.rare.push_back(g.variants.size() - 1);
  }

  // Fill any empty sweep band with a consonant-shift variant.
  auto frequent = [](const Group& g, std::size_t vi) { return std::find(g.rare.begin(), g.rare.end(), vi) == g.rare.end(); };
  for (std::size_t b = 0; b + 1 < cfg.sweep_bands.size(); ++b) {
    const double lo = cfg.sweep_bands[b], hi = cfg.sweep_bands[b + 1];
    bool covered = false;
    for (const auto& g : groups)
      for (std::size_t vi = 0; vi < g.variants.size(); ++vi)
        if (frequent(g, vi) && g.variants[vi].skeleton_score >= lo && g.variants[vi].skeleton_score < hi) covered = true;
    for (std::size_t gi = 0; gi < groups.size() && !covered; ++gi) {
      auto& g = groups[gi];
      if (g.variants.size() >= cfg.max_variants) continue;
      for (const auto& [units, phenomenon] : all_shifts(g.units)) {
        const auto form = join_units(units);
        const double s = skel(form, g.canonical);
        if (s < lo || s >= hi || !fresh(form) || !apart_from_others(form, gi)) continue;
        used.insert(form);
        g.variants.push_back(make_variant(form, gi, phenomenon));
        covered = true;
        break;
      }
    }
    if (!covered) throw Error("synth: no variant fits the band [" + format_fixed(lo, 2) + ", " + format_fixed(hi, 2) + ")");
  }

  // Distractors, context words and fillers, all far from every canonical.
  auto far_word = [&](std::size_t min_syll, std::size_t max_syll) {
    for (std::size_t tries = 0; tries < 200000; ++tries) {
      const auto w = join_units(random_word(rng, min_syll, max_syll));
      if (!fresh(w)) continue;
      const auto near = [&](const std::string& x) { return skel(w, x) >= cfg.distractor_separation; };
      if (std::any_of(groups.begin(), groups.end(), [&](const Group& g) {
            return near(g.canonical) ||
                   std::any_of(g.variants.begin(), g.variants.end(), [&](const PlantedVariant& v) { return near(v.form); });
          }))
        continue;
      used.insert(w);
      return w;
    }
    throw Error("synth: could not place a distant word");
  };
  std::vector<std::string> fillers;
  for (std::size_t i = 0; i < cfg.fillers; ++i) fillers.push_back(far_word(1, 2));
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    auto& g = groups[gi];
    if (gi < cfg.distractors) g.distractor = far_word(2, 3);
    for (std::size_t i = 0; i < cfg.context_words_per_group; ++i) g.context.push_back(far_word(1, 2));
  }

  // Frames: the slot plus four group words and two fillers, no repeats.
  for (auto& g : groups) {
    std::set<Units> seen;
    for (std::size_t tries = 0; g.frames.size() < cfg.frames_per_group; ++tries) {
      if (tries > 100000) throw Error("synth: could not build distinct frames");
      auto ctx = g.context;
      rng.shuffle(ctx);
      Units f(ctx.begin(), ctx.begin() + 4);
      f.push_back(rng.pick(fillers));
      f.push_back(rng.pick(fillers));
      rng.shuffle(f);
      f.insert(f.begin() + static_cast<std::ptrdiff_t>(rng.below(f.size() + 1)), std::string());
      if (seen.insert(f).second) g.frames.push_back(std::move(f));
    }
  }

  // Sentences.
  std::vector<std::string> texts;
  auto emit = [&](const Units& frame, const std::string& word) {
    std::string s;
    for (const auto& t : frame) {
      if (!s.empty()) s += ' ';
      s += t.empty() ? word : t;
    }
    texts.push_back(decorate(rng, s));
  };
  for (auto& g : groups) {
    std::vector<std::pair<std::string, std::optional<std::string>>> members;
    members.emplace_back(g.canonical, digit_spelling(rng, g.units));
    for (auto& v : g.variants) {
      // Units are lost for variants; re-split on the known digraphs.
      Units u;
      for (std::size_t i = 0; i < v.form.size();) {
        if (i + 1 < v.form.size() && v.form[i + 1] == 'h' && (v.form[i] == 'c' || v.form[i] == 'k' || v.form[i] == 'g')) {
          u.push_back(v.form.substr(i, 2));
          i += 2;
        } else {
          u.push_back(v.form.substr(i++, 1));
        }
      }
      if (rng.chance(0.5)) {
        if (auto raw = digit_spelling(rng, u)) v.raw_form = raw;
      }
      members.emplace_back(v.form, v.raw_form);
    }
    for (std::size_t m = 0; m < members.size(); ++m) {
      const bool rare = m > 0 && std::find(g.rare.begin(), g.rare.end(), m - 1) != g.rare.end();
      const std::size_t uses = rare ? 1 : g.frames.size();
      for (std::size_t f = 0; f < uses; ++f) {
        const auto& [clean, raw] = members[m];
        emit(g.frames[f], raw && f % 2 == 1 ? *raw : clean);
      }
    }
    if (!g.distractor.empty())
      for (const auto& f : g.frames) emit(f, g.distractor);
  }

  // Noise the cleaner must drop.
  const std::vector<std::string> arabic{"\xd8\xb4\xd9\x83\xd8\xb1\xd8\xa7 \xd8\xa8\xd8\xb2\xd8\xa7\xd9\x81",
                                        "\xd9\x85\xd8\xb1\xd8\xad\xd8\xa8\xd8\xa7 \xd8\xa8\xd9\x8a\xd9\x83\xd9\x85"};
  for (std::size_t i = 0; i < cfg.noise_comments && !texts.empty(); ++i) {
    switch (i % 3) {
      case 0: texts.push_back(arabic[i % arabic.size()]); break;
      case 1: texts.push_back(texts[rng.below(texts.size())]); break;
      default: texts.push_back(rng.pick(fillers) + "!!!"); break;
    }
  }
  rng.shuffle(texts);

  SynthCorpus out;
  for (std::size_t i = 0; i < texts.size(); ++i) out.comments.push_back(RawComment{"line-" + std::to_string(i + 1), texts[i], ""});

  // Counts as the cleaner sees them.
  const Corpus corpus = clean_corpus(out.comments, CleanConfig{});

  std::vector<LexiconEntry> entries;
  std::set<std::pair<std::string, std::string>> reference;
  for (auto& g : groups) {
    out.canonicals.push_back(g.canonical);
    if (!g.distractor.empty()) out.distractors.push_back(g.distractor);
    entries.push_back(LexiconEntry{g.canonical, std::nullopt, "", EntryOrigin::converted});
    for (auto& v : g.variants) {
      v.count = corpus.count(v.form);
      reference.emplace(v.form, v.canonical);
      out.variants.push_back(v);
    }
  }
  for (std::size_t i = 0; i < cfg.oov_entries; ++i) {
    for (std::size_t tries = 0;; ++tries) {
      if (tries > 200000) throw Error("synth: could not place lexicon-only entries");
      const auto w = join_units(random_word(rng, 2, 3));
      if (!fresh(w) || std::any_of(groups.begin(), groups.end(),
                                   [&](const Group& g) { return skel(w, g.canonical) >= cfg.group_separation; }))
        continue;
      used.insert(w);
      entries.push_back(LexiconEntry{w, std::nullopt, "", EntryOrigin::converted});
      break;
    }
  }
  out.lexicon = Lexicon(std::move(entries));
  out.reference = ReferenceDictionary(std::move(reference));
  return out;
}

void write_synthetic(const SynthCorpus& s, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "comments.txt", std::ios::binary);
    if (!out) throw Error("cannot write " + (dir / "comments.txt").string());
    for (const auto& c : s.comments) out << c.text << '\n';
  }
  save_lexicon(s.lexicon, dir / "lexicon.tsv");
  save_reference(s.reference, dir / "reference.tsv");
  std::ofstream out(dir / "variants.tsv", std::ios::binary);
  if (!out) throw Error("cannot write " + (dir / "variants.tsv").string());
  out << "translit\tcanonical\tphenomenon\tskeleton_equal\tskeleton_score\tcount\traw_form\n";
  for (const auto& v : s.variants) {
    out << v.form << '\t' << v.canonical << '\t' << v.phenomenon << '\t' << (v.skeleton_equal ? "yes" : "no") << '\t'
        << format_fixed(v.skeleton_score, 6) << '\t' << v.count << '\t' << v.raw_form.value_or("") << '\n';
  }
}

}  // namespace ary
