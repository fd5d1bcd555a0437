#include "hcoref/lexicon.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "hcoref/error.hpp"

namespace hcoref {

namespace fs = std::filesystem;

std::string_view to_string(PronounClass c) {
  switch (c) {
    case PronounClass::Personal: return "personal";
    case PronounClass::Demonstrative: return "demonstrative";
    case PronounClass::Reflexive: return "reflexive";
  }
  return "personal";
}

std::string to_string(const AttributeLattice& a) {
  std::string out = "number={";
  if (a.number.contains(Number::Singular)) out += "sg,";
  if (a.number.contains(Number::Plural)) out += "pl,";
  out += "} animacy={";
  if (a.animacy.contains(Animacy::Animate)) out += "animate,";
  if (a.animacy.contains(Animacy::Inanimate)) out += "inanimate,";
  out += "} person={";
  if (a.person.contains(Person::First)) out += "1,";
  if (a.person.contains(Person::Second)) out += "2,";
  if (a.person.contains(Person::Third)) out += "3,";
  out += "} gender={";
  if (a.gender.contains(Gender::Masc)) out += "m,";
  if (a.gender.contains(Gender::Fem)) out += "f,";
  if (a.gender.contains(Gender::Neut)) out += "n,";
  out += "}";
  return out;
}

const PronounEntry* Lexicons::pronoun(std::string_view form) const {
  auto it = pronoun_table.find(std::string(form));
  if (it == pronoun_table.end()) it = pronoun_table.find(ascii_lower(form));
  return it == pronoun_table.end() ? nullptr : &it->second;
}

bool Lexicons::is_speech_pronoun(std::string_view form) const {
  return speech_pronouns.contains(std::string(form)) ||
         speech_pronouns.contains(ascii_lower(form));
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

namespace {

PronounEntry entry(PronounClass c, ValueSet<Number> n, ValueSet<Person> p,
                   ValueSet<Animacy> a, ValueSet<Gender> g = {}) {
  PronounEntry e;
  e.pronoun_class = c;
  e.attrs.number = n;
  e.attrs.person = p;
  e.attrs.animacy = a;
  e.attrs.gender = g;
  return e;
}

// ---- line format --------------------------------------------------------

struct Line {
  std::string form;
  std::map<std::string, std::string> fields;
  int number = 0;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

std::vector<Line> read_lines(const fs::path& path, bool required) {
  std::vector<Line> out;
  std::ifstream in(path);
  if (!in) {
    if (required) {
      throw Error(ErrorCode::Io, "cannot open lexicon file " + path.string());
    }
    return out;
  }
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.empty() || raw.front() == '#') continue;
    Line line;
    line.number = number;
    const auto tab = raw.find('\t');
    line.form = raw.substr(0, tab);
    if (tab != std::string::npos) {
      for (const auto& kv : split(raw.substr(tab + 1), ';')) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
          throw Error(ErrorCode::InvalidConfig,
                      path.string() + ": field without '=': " + kv, number);
        }
        line.fields[kv.substr(0, eq)] = kv.substr(eq + 1);
      }
    }
    out.push_back(std::move(line));
  }
  return out;
}

[[noreturn]] void bad_value(const fs::path& path, const Line& line,
                            const std::string& value) {
  throw Error(ErrorCode::InvalidConfig,
              path.string() + ": unrecognized value '" + value + "'",
              line.number);
}

ValueSet<Number> parse_number(const fs::path& p, const Line& l,
                              const std::string& v) {
  ValueSet<Number> s;
  for (const auto& x : split(v, ',')) {
    if (x == "sg") s.insert(Number::Singular);
    else if (x == "pl") s.insert(Number::Plural);
    else bad_value(p, l, x);
  }
  return s;
}

ValueSet<Person> parse_person(const fs::path& p, const Line& l,
                              const std::string& v) {
  ValueSet<Person> s;
  for (const auto& x : split(v, ',')) {
    if (x == "1") s.insert(Person::First);
    else if (x == "2") s.insert(Person::Second);
    else if (x == "3") s.insert(Person::Third);
    else bad_value(p, l, x);
  }
  return s;
}

ValueSet<Animacy> parse_animacy_set(const fs::path& p, const Line& l,
                                    const std::string& v) {
  ValueSet<Animacy> s;
  for (const auto& x : split(v, ',')) {
    if (x == "animate") s.insert(Animacy::Animate);
    else if (x == "inanimate") s.insert(Animacy::Inanimate);
    else bad_value(p, l, x);
  }
  return s;
}

ValueSet<Gender> parse_gender(const fs::path& p, const Line& l,
                              const std::string& v) {
  ValueSet<Gender> s;
  for (const auto& x : split(v, ',')) {
    if (x == "m") s.insert(Gender::Masc);
    else if (x == "f") s.insert(Gender::Fem);
    else if (x == "n") s.insert(Gender::Neut);
    else bad_value(p, l, x);
  }
  return s;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ',';
    out += parts[i];
  }
  return out;
}

std::string format_number(ValueSet<Number> s) {
  std::vector<std::string> v;
  if (s.contains(Number::Singular)) v.push_back("sg");
  if (s.contains(Number::Plural)) v.push_back("pl");
  return join(v);
}

std::string format_person(ValueSet<Person> s) {
  std::vector<std::string> v;
  if (s.contains(Person::First)) v.push_back("1");
  if (s.contains(Person::Second)) v.push_back("2");
  if (s.contains(Person::Third)) v.push_back("3");
  return join(v);
}

std::string format_animacy(ValueSet<Animacy> s) {
  std::vector<std::string> v;
  if (s.contains(Animacy::Animate)) v.push_back("animate");
  if (s.contains(Animacy::Inanimate)) v.push_back("inanimate");
  return join(v);
}

std::string format_gender(ValueSet<Gender> s) {
  std::vector<std::string> v;
  if (s.contains(Gender::Masc)) v.push_back("m");
  if (s.contains(Gender::Fem)) v.push_back("f");
  if (s.contains(Gender::Neut)) v.push_back("n");
  return join(v);
}

std::set<std::string> read_list(const fs::path& path) {
  std::set<std::string> out;
  for (const auto& line : read_lines(path, false)) out.insert(line.form);
  return out;
}

void write_list(const fs::path& path, const std::set<std::string>& items) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  for (const auto& item : items) out << item << '\n';
}

std::set<std::string> tag_field(const Line& line) {
  auto it = line.fields.find("tags");
  if (it == line.fields.end()) return {};
  auto parts = split(it->second, ' ');
  return {parts.begin(), parts.end()};
}

}  // namespace

Lexicons Lexicons::english_default() {
  using enum PronounClass;
  const ValueSet<Number> sg{Number::Singular}, pl{Number::Plural},
      both{Number::Singular, Number::Plural};
  const ValueSet<Person> p1{Person::First}, p2{Person::Second},
      p3{Person::Third};
  const ValueSet<Animacy> anim{Animacy::Animate},
      inanim{Animacy::Inanimate},
      any{Animacy::Animate, Animacy::Inanimate};
  const ValueSet<Gender> masc{Gender::Masc}, fem{Gender::Fem},
      neut{Gender::Neut};

  Lexicons lex;
  auto& t = lex.pronoun_table;
  t["I"] = entry(Personal, sg, p1, anim);
  t["me"] = entry(Personal, sg, p1, anim);
  t["we"] = entry(Personal, pl, p1, anim);
  t["us"] = entry(Personal, pl, p1, anim);
  t["you"] = entry(Personal, both, p2, anim);
  t["he"] = entry(Personal, sg, p3, anim, masc);
  t["him"] = entry(Personal, sg, p3, anim, masc);
  t["she"] = entry(Personal, sg, p3, anim, fem);
  t["her"] = entry(Personal, sg, p3, anim, fem);
  t["it"] = entry(Personal, sg, p3, inanim, neut);
  t["they"] = entry(Personal, pl, p3, any);
  t["them"] = entry(Personal, pl, p3, any);
  t["myself"] = entry(Reflexive, sg, p1, anim);
  t["himself"] = entry(Reflexive, sg, p3, anim, masc);
  t["herself"] = entry(Reflexive, sg, p3, anim, fem);
  t["itself"] = entry(Reflexive, sg, p3, inanim, neut);
  t["themselves"] = entry(Reflexive, pl, p3, any);
  t["this"] = entry(Demonstrative, sg, p3, {});
  t["that"] = entry(Demonstrative, sg, p3, {});
  t["these"] = entry(Demonstrative, pl, p3, {});
  t["those"] = entry(Demonstrative, pl, p3, {});

  lex.quote_verbs = {"say", "said", "says", "tell", "told", "tells", "announce",
                     "announced", "state", "stated", "declare", "declared"};
  lex.title_nouns = {"president", "minister", "director", "coach",
                     "manager", "mayor", "governor", "professor",
                     "chairman", "ambassador"};
  lex.name_gazetteer = {
      {"David", masc},  {"Emmanuel", masc}, {"Ali", masc},
      {"Reza", masc},   {"Hassan", masc},   {"Mohammad", masc},
      {"Omid", masc},   {"Maryam", fem},    {"Sara", fem},
      {"Zahra", fem},   {"Leila", fem},     {"Nasrin", fem},
  };
  lex.demonstrative_markers = {"this", "that", "these", "those"};
  lex.speech_pronouns = {"I", "me", "we", "us", "you", "myself"};
  lex.object_markers = {"\xd8\xb1\xd8\xa7"};  // Persian object marker "ra"
  return lex;
}

Lexicons Lexicons::load_directory(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::Io, "lexicon directory not found: " + dir.string());
  }
  Lexicons lex;
  const auto pron_path = dir / "pronouns.tsv";
  for (const auto& line : read_lines(pron_path, true)) {
    PronounEntry e;
    for (const auto& [key, value] : line.fields) {
      if (key == "class") {
        if (value == "personal") e.pronoun_class = PronounClass::Personal;
        else if (value == "demonstrative") e.pronoun_class = PronounClass::Demonstrative;
        else if (value == "reflexive") e.pronoun_class = PronounClass::Reflexive;
        else bad_value(pron_path, line, value);
      } else if (key == "number") {
        e.attrs.number = parse_number(pron_path, line, value);
      } else if (key == "person") {
        e.attrs.person = parse_person(pron_path, line, value);
      } else if (key == "animacy") {
        e.attrs.animacy = parse_animacy_set(pron_path, line, value);
      } else if (key == "gender") {
        e.attrs.gender = parse_gender(pron_path, line, value);
      } else {
        bad_value(pron_path, line, key);
      }
    }
    lex.pronoun_table.emplace(line.form, e);
  }
  if (lex.pronoun_table.empty()) {
    throw Error(ErrorCode::InvalidConfig, pron_path.string() + " is empty");
  }
  const auto names_path = dir / "names.tsv";
  for (const auto& line : read_lines(names_path, false)) {
    ValueSet<Gender> g;
    if (auto it = line.fields.find("gender"); it != line.fields.end()) {
      g = parse_gender(names_path, line, it->second);
    }
    lex.name_gazetteer.emplace(line.form, g);
  }
  lex.quote_verbs = read_list(dir / "quote_verbs.txt");
  lex.title_nouns = read_list(dir / "titles.txt");
  lex.demonstrative_markers = read_list(dir / "demonstratives.txt");
  lex.speech_pronouns = read_list(dir / "speech_pronouns.txt");
  lex.object_markers = read_list(dir / "object_markers.txt");
  if (fs::exists(dir / "quote_marks.txt")) {
    lex.quote_marks = read_list(dir / "quote_marks.txt");
  }
  const auto tags_path = dir / "tags.tsv";
  for (const auto& line : read_lines(tags_path, false)) {
    if (line.form == "pronoun") lex.tags.pronoun = tag_field(line);
    else if (line.form == "noun") lex.tags.noun = tag_field(line);
    else if (line.form == "proper_noun") lex.tags.proper_noun = tag_field(line);
    else if (line.form == "plural") lex.tags.plural = tag_field(line);
    else if (line.form == "preposition") lex.tags.preposition = tag_field(line);
    else if (line.form == "punctuation") lex.tags.punctuation = tag_field(line);
    else if (line.form == "verb_prefix") {
      auto it = line.fields.find("prefix");
      lex.tags.verb_prefix = it == line.fields.end() ? "" : it->second;
    } else {
      bad_value(tags_path, line, line.form);
    }
  }
  return lex;
}

void Lexicons::save_directory(const fs::path& dir) const {
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "pronouns.tsv");
    if (!out) throw Error(ErrorCode::Io, "cannot write lexicon directory");
    for (const auto& [form, e] : pronoun_table) {
      out << form << "\tclass=" << to_string(e.pronoun_class);
      if (!e.attrs.number.empty()) out << ";number=" << format_number(e.attrs.number);
      if (!e.attrs.person.empty()) out << ";person=" << format_person(e.attrs.person);
      if (!e.attrs.animacy.empty()) out << ";animacy=" << format_animacy(e.attrs.animacy);
      if (!e.attrs.gender.empty()) out << ";gender=" << format_gender(e.attrs.gender);
      out << '\n';
    }
  }
  {
    std::ofstream out(dir / "names.tsv");
    for (const auto& [name, g] : name_gazetteer) {
      out << name;
      if (!g.empty()) out << "\tgender=" << format_gender(g);
      out << '\n';
    }
  }
  {
    std::ofstream out(dir / "tags.tsv");
    auto row = [&](const char* name, const std::set<std::string>& tags) {
      out << name << "\ttags=";
      bool first = true;
      for (const auto& tag : tags) {
        out << (first ? "" : " ") << tag;
        first = false;
      }
      out << '\n';
    };
    row("pronoun", tags.pronoun);
    row("noun", tags.noun);
    row("proper_noun", tags.proper_noun);
    row("plural", tags.plural);
    row("preposition", tags.preposition);
    row("punctuation", tags.punctuation);
    out << "verb_prefix\tprefix=" << tags.verb_prefix << '\n';
  }
  write_list(dir / "quote_verbs.txt", quote_verbs);
  write_list(dir / "titles.txt", title_nouns);
  write_list(dir / "demonstratives.txt", demonstrative_markers);
  write_list(dir / "speech_pronouns.txt", speech_pronouns);
  write_list(dir / "object_markers.txt", object_markers);
  write_list(dir / "quote_marks.txt", quote_marks);
}

}  // namespace hcoref
