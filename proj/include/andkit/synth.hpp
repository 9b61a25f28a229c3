#pragma once

// Synthetic registry + corpus generator. Authors sharing a credible full name
// form a block; titles and abstracts draw on per-author topic vocabularies,
// bylines carry name variants, and a share of each author's output drifts
// away from their usual topic, venue and affiliation. Output per author is
// heavy-tailed, and long careers pass through phases with their own topic,
// venues and affiliation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "andkit/error.hpp"
#include "andkit/ingest.hpp"
#include "andkit/metrics.hpp"
#include "andkit/namekit.hpp"
#include "andkit/types.hpp"
#include "andkit/util.hpp"

namespace andkit {

struct SynthOptions {
  std::size_t authors = 2000;
  std::size_t citations = 10000;  // corpus size; claimed citations come first
  double single_author_block_share = 0.945;
  std::size_t max_authors_per_block = 5;
  double unclaimed_share = 0.05;
  double unresolved_claim_rate = 0.01;
  double shared_citation_rate = 0.05;  // a second registered author in the byline
  double middle_name_rate = 0.3;
  double initials_rate = 0.3;
  double variant_rate = 0.04;  // reversal / misspelling / sticky / incomplete
  double drift_rate = 0.2;
  double prolific_share = 0.06;
  std::size_t prolific_min_papers = 10;
  std::size_t prolific_max_papers = 150;
  std::size_t papers_per_phase = 20;  // a career gains a phase per this many papers
  double shared_lab_rate = 0.5;  // homonyms sharing venues and affiliations
  double missing_year_rate = 0.02;
  double missing_venue_rate = 0.03;
  double missing_affiliation_rate = 0.05;
  double abstract_rate = 0.7;
  std::uint64_t seed = 1;
};

struct SyntheticCorpus {
  std::vector<AuthorRecord> registry;
  std::vector<CitationRecord> corpus;
};

enum class NameVariant { exact, initials, reversal, misspelling, sticky, incomplete };

inline const char* variant_name(NameVariant v) {
  switch (v) {
    case NameVariant::exact: return "exact";
    case NameVariant::initials: return "initials";
    case NameVariant::reversal: return "reversal";
    case NameVariant::misspelling: return "misspelling";
    case NameVariant::sticky: return "sticky";
    case NameVariant::incomplete: return "incomplete";
  }
  return "?";
}

namespace synth {

inline const std::vector<std::string>& given_names() {
  static const std::vector<std::string> v{
      "Adam", "Adrian", "Agnieszka", "Aiko", "Alba", "Alejandro", "Aleksander", "Alice",
      "Amara", "Ana", "Anders", "Andrea", "Anna", "Antoine", "Arjun", "Astrid",
      "Beatriz", "Benedikt", "Bjørn", "Bogdan", "Camille", "Carlos", "Carmen", "Chen",
      "Chiara", "Claudia", "Dagmar", "Daniel", "Dario", "David", "Diego", "Dmitri",
      "Elena", "Elif", "Emil", "Emma", "Enrique", "Erik", "Fatima", "Felix",
      "Fernando", "Florian", "Florina", "Francesca", "François", "Gabriel", "Giulia", "Grzegorz",
      "Hana", "Hannah", "Hassan", "Helena", "Henrik", "Hiroshi", "Ines", "Ingrid",
      "Isabel", "Ivan", "Jakob", "Jan", "Javier", "Jelena", "Jiří", "Joana",
      "Johannes", "José", "Julia", "Julien", "Karin", "Katarzyna", "Kenji", "Klaus",
      "Lars", "Laura", "Leila", "Lena", "Linnea", "Lorenzo", "Lucía", "Lukas",
      "Magnus", "Malgorzata", "Marco", "Margarida", "Maria", "Marta", "Mateo", "Mehmet",
      "Mihai", "Mikael", "Milena", "Miriam", "Nadia", "Nikola", "Nils", "Noemi",
      "Olga", "Omar", "Oskar", "Pablo", "Paolo", "Patricia", "Pedro", "Petra",
      "Pierre", "Rafael", "Raquel", "René", "Roberto", "Rui", "Sabine", "Samir",
      "Sara", "Sebastian", "Sergio", "Simone", "Sofia", "Søren", "Stefan", "Susanne",
      "Tamara", "Teresa", "Thomas", "Tobias", "Tomasz", "Ulrike", "Valentina", "Vera",
      "Viktor", "Wei", "Xavier", "Yasmin", "Yuki", "Zofia", "Zoltán", "Žofie"};
  return v;
}

inline const std::vector<std::string>& family_names() {
  static const std::vector<std::string> v{
      "Abramowicz", "Acosta", "Albrecht", "Almeida", "Andersson", "Antonescu", "Arslan", "Bach",
      "Balogh", "Barbieri", "Becker", "Benedetti", "Bergström", "Bianchi", "Blažek", "Böhm",
      "Bondarenko", "Borowski", "Brandt", "Bruno", "Caruso", "Castillo", "Cerny", "Ciornei",
      "Colombo", "Costa", "Cruz", "Dąbrowski", "Dahl", "de Vries", "Demir", "Diaz",
      "Dijkstra", "Dobos", "Dumitru", "Dvořák", "Eriksen", "Esposito", "Farkas", "Ferrari",
      "Ferreira", "Fischer", "Fontaine", "Friedrich", "Gallo", "García", "Gauthier", "Georgiou",
      "Gomes", "González", "Greco", "Grünewald", "Gustafsson", "Haas", "Hansen", "Hartmann",
      "Hernández", "Hoffmann", "Horváth", "Ionescu", "Ivanova", "Jakobsen", "Janssen", "Jensen",
      "Jiménez", "Johansson", "Kaczmarek", "Kaya", "Keller", "Kiss", "Klein", "Koch",
      "Kováč", "Kowalski", "Krause", "Kuznetsov", "Lambert", "Larsen", "Laurent", "Lehmann",
      "Lindqvist", "Lombardi", "López", "Lorenz", "Maier", "Mancini", "Marković", "Martín",
      "Meyer", "Molnár", "Moreau", "Moretti", "Müller", "Nagy", "Navarro", "Nielsen",
      "Novak", "Nowak", "Nyström", "Olsen", "Öztürk", "Papadopoulos", "Pavlović", "Pereira",
      "Petrov", "Pham", "Popescu", "Quintero", "Ramírez", "Ricci", "Richter", "Rizzo",
      "Rodrigues", "Romano", "Rossi", "Rusu", "Sánchez", "Santos", "Schäfer", "Schmidt",
      "Schneider", "Schulz", "Silva", "Simonsen", "Sokolov", "Stanescu", "Svensson", "Szabó",
      "Tanaka", "Thomsen", "Toth", "Urbański", "Valentini", "van Dijk", "Vasquez", "Vidal",
      "Vogel", "Volkov", "Wagner", "Walczak", "Weber", "Winkler", "Wójcik", "Yilmaz",
      "Zając", "Zanetti", "Zeller", "Zhang", "Zielinski", "Žukauskas"};
  return v;
}

/// Deterministic pseudo-words; the same list regardless of the corpus seed.
inline std::vector<std::string> pseudo_words(std::size_t n, std::uint64_t salt) {
  static const std::vector<std::string> syl{
      "ba", "ce", "di", "fo", "gu", "ka", "le", "mi", "no", "pu", "ra", "se", "ti", "vo",
      "zu", "tra", "pho", "cry", "gen", "lyt", "mor", "nex", "quo", "sta", "ther", "vin",
      "xan", "dro", "lum", "ost"};
  Rng rng(derive_seed(0x5eedULL, salt));
  std::set<std::string> seen;
  std::vector<std::string> out;
  while (out.size() < n) {
    std::string w;
    const auto parts = 2 + rng.below(3);
    for (std::uint64_t k = 0; k < parts; ++k) w += rng.pick(syl);
    if (seen.insert(w).second) out.push_back(w);
  }
  return out;
}

inline constexpr std::size_t kTopics = 60;
inline constexpr std::size_t kTopicWords = 14;

struct Vocabulary {
  std::vector<std::vector<std::string>> topics;
  std::vector<std::string> general;
  std::vector<std::string> venues;
  std::vector<std::string> affiliations;
};

inline const Vocabulary& vocabulary() {
  static const Vocabulary v = [] {
    Vocabulary voc;
    const auto words = pseudo_words(kTopics * kTopicWords + 400, 1);
    for (std::size_t t = 0; t < kTopics; ++t) {
      voc.topics.emplace_back(words.begin() + static_cast<std::ptrdiff_t>(t * kTopicWords),
                              words.begin() + static_cast<std::ptrdiff_t>((t + 1) * kTopicWords));
    }
    voc.general.assign(words.begin() + static_cast<std::ptrdiff_t>(kTopics * kTopicWords),
                       words.end());
    static const char* kVenueKinds[] = {"Journal of", "Annals of", "Letters in",
                                        "Proceedings of", "Reviews in"};
    const auto vw = pseudo_words(80, 2);
    for (std::size_t i = 0; i < vw.size(); ++i) {
      std::string w = vw[i];
      w[0] = static_cast<char>(w[0] - 32);
      voc.venues.push_back(std::string(kVenueKinds[i % 5]) + " " + w);
    }
    static const char* kPlaces[] = {"University of", "Institute of", "Centre for",
                                    "Academy of"};
    const auto aw = pseudo_words(120, 3);
    for (std::size_t i = 0; i < aw.size(); ++i) {
      std::string w = aw[i];
      w[0] = static_cast<char>(w[0] - 32);
      voc.affiliations.push_back(std::string(kPlaces[i % 4]) + " " + w);
    }
    return voc;
  }();
  return v;
}

struct PersonName {
  std::string given;
  std::string middle;  // may be empty
  std::string family;

  std::string full() const {
    return middle.empty() ? given + " " + family : given + " " + middle + " " + family;
  }
};

inline std::string first_letter(const std::string& word) {
  const auto cps = utf8_decode(word);
  return cps.empty() ? std::string() : utf8_encode(cps.substr(0, 1));
}

/// Replaces, drops or swaps one letter after the first of the longest word.
inline std::string misspell(const std::string& full, Rng& rng) {
  auto tokens = split_whitespace(full);
  std::size_t w = 0;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    if (utf8_decode(tokens[i]).size() > utf8_decode(tokens[w]).size()) w = i;
  }
  auto cps = utf8_decode(tokens[w]);
  if (cps.size() < 3) return full;
  const auto at = 1 + rng.below(cps.size() - 2);
  switch (rng.below(3)) {
    case 0: cps[at] = static_cast<char32_t>(U'a' + rng.below(26)); break;
    case 1: cps.erase(at, 1); break;
    default: std::swap(cps[at], cps[at + 1]); break;
  }
  tokens[w] = utf8_encode(cps);
  std::string out;
  for (const auto& t : tokens) out += (out.empty() ? "" : " ") + t;
  return out;
}

inline std::string render(const PersonName& n, NameVariant v, Rng& rng) {
  switch (v) {
    case NameVariant::exact:
      return n.full();
    case NameVariant::initials: {
      std::string s = first_letter(n.given) + ".";
      if (!n.middle.empty()) s += first_letter(n.middle) + ".";
      return s + " " + n.family;
    }
    case NameVariant::reversal:
      return n.family + " " + (n.middle.empty() ? n.given : n.given + " " + n.middle);
    case NameVariant::misspelling:
      return misspell(n.full(), rng);
    case NameVariant::sticky: {
      std::string s = n.given + n.middle;
      for (char c : n.family) {
        if (c != ' ') s.push_back(c);
      }
      return s;
    }
    case NameVariant::incomplete:
      return n.middle.empty() ? first_letter(n.given) + " " + n.family
                              : n.given + " " + n.family;
  }
  return n.full();
}

inline PersonName random_person(Rng& rng, double middle_rate) {
  PersonName p;
  p.given = rng.pick(given_names());
  if (rng.chance(middle_rate)) {
    do {
      p.middle = rng.pick(given_names());
    } while (p.middle == p.given);
  }
  p.family = rng.pick(family_names());
  return p;
}

/// Co-author that cannot be confused with `target` by family name.
inline PersonName coauthor_for(const PersonName& target, Rng& rng) {
  PersonName p;
  do {
    p = random_person(rng, 0.15);
  } while (p.family == target.family || p.given == target.given);
  return p;
}

inline std::string coauthor_byline_name(const PersonName& p, Rng& rng) {
  return rng.chance(0.4) ? render(p, NameVariant::initials, rng) : p.full();
}

inline std::string words_from(const std::vector<std::string>& topic, std::size_t n,
                              double topic_share, Rng& rng) {
  const auto& general = vocabulary().general;
  std::string s;
  for (std::size_t i = 0; i < n; ++i) {
    if (!s.empty()) s.push_back(' ');
    s += rng.chance(topic_share) ? rng.pick(topic) : rng.pick(general);
  }
  return s;
}

/// A stretch of a career with its own topic, venues and affiliation.
struct Phase {
  std::size_t topic = 0;
  std::vector<std::string> venues;
  std::string affiliation;
  int first_year = 2000;
  int last_year = 2005;
};

struct SynthAuthor {
  std::string id;
  PersonName name;
  std::size_t papers = 1;
  std::vector<Phase> phases;
};

inline std::string orcid_like(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "0000-%04zu-%04zu-%04zu", (i / 100000000) % 10000,
                (i / 10000) % 10000, i % 10000);
  return buf;
}

}  // namespace synth

/// Builds a registry and corpus. Every registered author belongs to exactly
/// one block (CFN); a share `single_author_block_share` of blocks hold one
/// author, the rest hold 2..max_authors_per_block homonyms.
inline SyntheticCorpus synthesize_corpus(const SynthOptions& opt) {
  using namespace synth;
  if (opt.authors == 0) throw Error(ErrorCategory::invalid_argument, "synth: authors must be > 0");
  const auto& voc = vocabulary();
  Rng rng(derive_seed(opt.seed, "synth-corpus"));

  const double claimed_target =
      static_cast<double>(opt.citations) * (1.0 - opt.unclaimed_share);
  const double mean_papers = claimed_target / static_cast<double>(opt.authors);
  // Log-uniform output of prolific authors between the two bounds.
  const double lo = std::log(static_cast<double>(opt.prolific_min_papers));
  const double hi = std::log(static_cast<double>(opt.prolific_max_papers));
  const double prolific_mean = (std::exp(hi) - std::exp(lo)) / (hi - lo);
  const double regular_mean = std::max(
      1.0, (mean_papers - opt.prolific_share * prolific_mean) / (1.0 - opt.prolific_share));
  const double keep_going = 1.0 - 1.0 / regular_mean;
  auto paper_count = [&] {
    if (rng.chance(opt.prolific_share)) {
      return static_cast<std::size_t>(std::lround(std::exp(lo + (hi - lo) * rng.uniform())));
    }
    std::size_t n = 1;
    while (n < opt.prolific_min_papers && rng.chance(keep_going)) ++n;
    return n;
  };

  // Blocks and their CFNs.
  std::vector<std::vector<SynthAuthor>> blocks;
  std::set<std::string> used_cfns;
  std::size_t made = 0;
  while (made < opt.authors) {
    std::size_t k = 1;
    if (!rng.chance(opt.single_author_block_share)) {
      k = 2;
      while (k < opt.max_authors_per_block && rng.chance(0.35)) ++k;
    }
    k = std::min(k, opt.authors - made);
    PersonName name;
    do {
      name = random_person(rng, opt.middle_name_rate);
    } while (!used_cfns.insert(name.full()).second);
    const bool shared_lab = k > 1 && rng.chance(opt.shared_lab_rate);
    std::vector<std::string> lab_venues;
    for (int v = 0; v < 3; ++v) lab_venues.push_back(rng.pick(voc.venues));
    const auto lab_affil = rng.pick(voc.affiliations);
    std::vector<SynthAuthor> block;
    std::set<std::size_t> topics;
    for (std::size_t a = 0; a < k; ++a) {
      SynthAuthor au;
      au.id = orcid_like(made + a + 1);
      au.name = name;
      au.papers = paper_count();
      const std::size_t n_phases =
          std::min<std::size_t>(6, 1 + au.papers / std::max<std::size_t>(1, opt.papers_per_phase));
      int year = 1980 + static_cast<int>(rng.below(n_phases > 1 ? 16 : 36));
      for (std::size_t ph = 0; ph < n_phases; ++ph) {
        Phase phase;
        do {
          phase.topic = rng.below(kTopics);
        } while (!topics.insert(phase.topic).second && topics.size() < kTopics);
        if (shared_lab && ph == 0) {
          phase.venues = lab_venues;
          phase.affiliation = lab_affil;
        } else {
          for (int v = 0; v < 3; ++v) phase.venues.push_back(rng.pick(voc.venues));
          phase.affiliation = rng.pick(voc.affiliations);
        }
        phase.first_year = std::min(2021, year);
        phase.last_year = std::min(2021, year + 3 + static_cast<int>(rng.below(8)));
        year = phase.last_year + 1;
        au.phases.push_back(std::move(phase));
      }
      block.push_back(std::move(au));
    }
    made += k;
    blocks.push_back(std::move(block));
  }

  std::vector<const SynthAuthor*> all;
  for (const auto& b : blocks) {
    for (const auto& a : b) all.push_back(&a);
  }

  SyntheticCorpus out;
  std::vector<std::vector<std::string>> claims(all.size());
  std::size_t doi_counter = 0;
  auto next_doi = [&] { return "10.5555/syn." + std::to_string(++doi_counter); };

  auto new_citation = [&](const std::vector<std::string>& topic, const std::string& venue,
                          std::optional<int> year) {
    CitationRecord c;
    c.doi = next_doi();
    c.title = words_from(topic, 6 + rng.below(7), 0.5, rng);
    if (rng.chance(opt.abstract_rate)) c.abstract = words_from(topic, 25 + rng.below(25), 0.3, rng);
    c.venue = rng.chance(opt.missing_venue_rate) ? std::string() : venue;
    c.year = rng.chance(opt.missing_year_rate) ? std::nullopt : year;
    return c;
  };

  for (std::size_t ai = 0; ai < all.size(); ++ai) {
    const auto& au = *all[ai];
    for (std::size_t p = 0; p < au.papers; ++p) {
      const auto& phase = au.phases[p * au.phases.size() / au.papers];
      const bool drift = rng.chance(opt.drift_rate);
      const auto& topic = drift ? voc.topics[rng.below(kTopics)] : voc.topics[phase.topic];
      const auto& venue =
          (drift && rng.chance(0.5)) ? rng.pick(voc.venues) : rng.pick(phase.venues);
      const auto year = phase.first_year + static_cast<int>(rng.below(static_cast<std::uint64_t>(
                                               phase.last_year - phase.first_year + 1)));
      auto c = new_citation(topic, venue, year);

      const std::size_t n_authors = 1 + rng.below(rng.chance(0.8) ? 6 : 12);
      const auto target_pos = rng.below(n_authors);
      for (std::size_t s = 0; s < n_authors; ++s) {
        AuthorSlot slot;
        if (s == target_pos) {
          NameVariant v = NameVariant::exact;
          if (rng.chance(opt.variant_rate)) {
            v = static_cast<NameVariant>(2 + rng.below(4));
          } else if (rng.chance(opt.initials_rate)) {
            v = NameVariant::initials;
          }
          slot.name = render(au.name, v, rng);
          const bool affil_drift = drift && rng.chance(0.5);
          slot.affiliation = affil_drift ? rng.pick(voc.affiliations) : phase.affiliation;
        } else {
          const auto co = coauthor_for(au.name, rng);
          slot.name = coauthor_byline_name(co, rng);
          slot.affiliation = rng.pick(voc.affiliations);
        }
        if (rng.chance(opt.missing_affiliation_rate)) slot.affiliation.clear();
        c.authors.push_back(std::move(slot));
      }
      // A second registered author (from another block) on the same paper.
      if (all.size() > 1 && rng.chance(opt.shared_citation_rate)) {
        std::size_t bi = rng.below(all.size());
        if (all[bi]->name.full() != au.name.full()) {
          AuthorSlot slot{all[bi]->name.full(), all[bi]->phases.front().affiliation};
          const auto at = rng.below(c.authors.size() + 1);
          c.authors.insert(c.authors.begin() + static_cast<std::ptrdiff_t>(at), std::move(slot));
          claims[bi].push_back(c.doi);
        }
      }
      claims[ai].push_back(c.doi);
      out.corpus.push_back(std::move(c));
    }
  }

  // Papers no registered author claims.
  while (out.corpus.size() < opt.citations) {
    const auto& topic = voc.topics[rng.below(kTopics)];
    auto c = new_citation(topic, rng.pick(voc.venues),
                          1985 + static_cast<int>(rng.below(37)));
    const std::size_t n_authors = 1 + rng.below(6);
    for (std::size_t s = 0; s < n_authors; ++s) {
      const auto p = random_person(rng, 0.15);
      c.authors.push_back({coauthor_byline_name(p, rng), rng.pick(voc.affiliations)});
    }
    out.corpus.push_back(std::move(c));
  }

  for (std::size_t ai = 0; ai < all.size(); ++ai) {
    AuthorRecord r;
    r.author_id = all[ai]->id;
    r.cfn = all[ai]->name.full();
    for (const auto& doi : claims[ai]) {
      // Claimed DOIs are spelled the way registries often spell them.
      std::string d = rng.chance(0.1) ? "10.5555/SYN." + doi.substr(12) : doi;
      if (std::find(r.claimed_dois.begin(), r.claimed_dois.end(), d) == r.claimed_dois.end()) {
        r.claimed_dois.push_back(std::move(d));
      }
    }
    if (rng.chance(opt.unresolved_claim_rate)) {
      r.claimed_dois.push_back("10.5555/missing." + std::to_string(ai));
    }
    out.registry.push_back(std::move(r));
  }

  rng.shuffle(out.corpus);
  for (std::size_t i = 0; i < out.corpus.size(); ++i) {
    out.corpus[i].paper_id = std::to_string(30000000 + i);
  }
  rng.shuffle(out.registry);
  return out;
}

inline void write_synthetic(const SyntheticCorpus& s, const std::string& registry_path,
                            const std::string& corpus_path) {
  std::ofstream reg(registry_path, std::ios::binary);
  if (!reg) throw Error(ErrorCategory::io, "cannot write " + registry_path);
  for (const auto& r : s.registry) write_line(reg, r);
  std::ofstream cor(corpus_path, std::ios::binary);
  if (!cor) throw Error(ErrorCategory::io, "cannot write " + corpus_path);
  for (const auto& c : s.corpus) write_line(cor, c);
}

// ---------------------------------------------------------------------------
// Position identification cases

struct PositionCase {
  std::string cfn;
  std::vector<std::string> names;
  int true_position = 0;  // 1-based
  NameVariant variant = NameVariant::exact;
};

/// Bylines where the target appears under one of the variant kinds, cycling
/// through the kinds evenly. Co-authors never share the target's given or
/// family name.
inline std::vector<PositionCase> synthesize_position_cases(std::size_t n, std::uint64_t seed) {
  using namespace synth;
  Rng rng(derive_seed(seed, "synth-positions"));
  std::vector<PositionCase> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    PositionCase pc;
    const auto person = random_person(rng, 0.3);
    pc.cfn = person.full();
    pc.variant = static_cast<NameVariant>(i % 6);
    const std::size_t n_authors = 1 + rng.below(8);
    const auto at = rng.below(n_authors);
    for (std::size_t s = 0; s < n_authors; ++s) {
      pc.names.push_back(s == at ? render(person, pc.variant, rng)
                                 : coauthor_byline_name(coauthor_for(person, rng), rng));
    }
    pc.true_position = static_cast<int>(at) + 1;
    out.push_back(std::move(pc));
  }
  return out;
}

// ---------------------------------------------------------------------------
// External id system

/// Simulates a third-party author-id system over a registry: each author
/// keeps one external id except that a claim is split off to a fresh id with
/// probability `split_rate`, and all authors sharing a CFN are merged under
/// one id with probability `merge_rate`.
inline ExternalIds synthesize_external_ids(const std::vector<AuthorRecord>& registry,
                                           std::uint64_t seed, double split_rate = 0.2,
                                           double merge_rate = 0.1) {
  std::vector<const AuthorRecord*> authors;
  for (const auto& a : registry) authors.push_back(&a);
  std::sort(authors.begin(), authors.end(), [](const AuthorRecord* a, const AuthorRecord* b) {
    return a->author_id < b->author_id;
  });
  Rng rng(derive_seed(seed, "synth-external-ids"));
  std::map<std::string, bool> merged;  // by trimmed CFN
  for (const auto* a : authors) merged.emplace(trim(a->cfn), false);
  for (auto& [cfn, m] : merged) m = rng.chance(merge_rate);
  ExternalIds ids;
  std::size_t fresh = 0;
  for (const auto* a : authors) {
    const auto cfn = trim(a->cfn);
    const std::string base = merged[cfn] ? "m:" + cfn : "x:" + a->author_id;
    for (const auto& doi : a->claimed_dois) {
      ids[{a->author_id, normalize_doi(doi)}] =
          rng.chance(split_rate) ? "s:" + std::to_string(++fresh) : base;
    }
  }
  return ids;
}

}  // namespace andkit
