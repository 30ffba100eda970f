#include "meme/text.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <regex>
#include <sstream>

namespace meme::text {

namespace {

const std::regex kUrlPattern(R"((https?://|www\.)\S+)");
const std::regex kMentionPattern(R"(@\w+)");

bool keep_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '\'';
}

}  // namespace

CleanText preprocess(const std::string& raw) {
    std::string s;
    s.reserve(raw.size());
    for (char c : raw) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));

    s = std::regex_replace(s, kUrlPattern, " ");
    s = std::regex_replace(s, kMentionPattern, " ");

    for (char& c : s) {
        if (!keep_char(c)) c = ' ';
    }

    CleanText out;
    std::istringstream ss(s);
    std::string token;
    while (ss >> token) out.tokens.push_back(token);
    return out;
}

namespace {

bool ends_with(const std::string& s, const char* suffix) {
    size_t len = std::strlen(suffix);
    return s.size() >= len && s.compare(s.size() - len, len, suffix) == 0;
}

PosTag suffix_tag(const std::string& word) {
    if (ends_with(word, "ing") || ends_with(word, "ed")) return PosTag::Verb;
    if (ends_with(word, "ous") || ends_with(word, "ful") || ends_with(word, "able") ||
        ends_with(word, "ive")) {
        return PosTag::Adj;
    }
    if (ends_with(word, "ly")) return PosTag::Other;
    return PosTag::Noun;
}

}  // namespace

std::vector<PosTag> pos_tag(const CleanText& t, const PosLexicon& lexicon) {
    std::vector<PosTag> tags;
    tags.reserve(t.tokens.size());
    for (const auto& token : t.tokens) {
        auto it = lexicon.find(token);
        tags.push_back(it != lexicon.end() ? it->second : suffix_tag(token));
    }
    return tags;
}

StylisticFeatures stylistic_features(const CleanText& t, const std::vector<PosTag>& tags) {
    if (t.tokens.size() != tags.size()) throw LengthMismatch();
    StylisticFeatures f;
    f.n_words = static_cast<int>(t.tokens.size());
    for (PosTag tag : tags) {
        if (tag == PosTag::Noun) ++f.n_noun;
        else if (tag == PosTag::Verb) ++f.n_verb;
        else if (tag == PosTag::Adj) ++f.n_adj;
    }
    if (f.n_words > 0) {
        f.r_noun = static_cast<double>(f.n_noun) / f.n_words;
        f.r_verb = static_cast<double>(f.n_verb) / f.n_words;
        f.r_adj = static_cast<double>(f.n_adj) / f.n_words;
    }
    return f;
}

AmbiguityFeatures ambiguity_features(const CleanText& t, const SynonymLexicon& lex) {
    AmbiguityFeatures f;
    if (t.tokens.empty()) return f;  // (0, 0, 0) by convention
    double sum = 0;
    int max_len = 0;
    for (const auto& token : t.tokens) {
        auto it = lex.find(token);
        int len = it != lex.end() ? static_cast<int>(it->second.size()) : 1;
        sum += len;
        max_len = std::max(max_len, len);
    }
    f.mean_synset_len = sum / static_cast<double>(t.tokens.size());
    f.max_synset_len = max_len;
    f.synset_gap = max_len - f.mean_synset_len;
    return f;
}

TfidfModel fit_tfidf(const std::vector<CleanText>& corpus, int min_df) {
    if (corpus.empty()) throw EmptyCorpus();

    std::map<std::string, long> df;
    for (const auto& doc : corpus) {
        std::set<std::string> seen;
        for (size_t i = 0; i < doc.tokens.size(); ++i) {
            seen.insert(doc.tokens[i]);
            if (i + 1 < doc.tokens.size()) {
                seen.insert(doc.tokens[i] + " " + doc.tokens[i + 1]);
            }
        }
        for (const auto& g : seen) ++df[g];
    }

    TfidfModel m;
    m.n_docs = static_cast<long>(corpus.size());
    int col = 0;
    for (const auto& [gram, freq] : df) {  // std::map iterates lexicographically
        if (freq < min_df) continue;
        m.vocabulary[gram] = col++;
        m.idf.push_back(std::log((1.0 + m.n_docs) / (1.0 + freq)) + 1.0);
    }
    return m;
}

SparseVec transform_tfidf(const TfidfModel& m, const CleanText& t) {
    std::map<int, double> counts;
    auto add = [&](const std::string& gram) {
        auto it = m.vocabulary.find(gram);
        if (it != m.vocabulary.end()) counts[it->second] += 1.0;
    };
    for (size_t i = 0; i < t.tokens.size(); ++i) {
        add(t.tokens[i]);
        if (i + 1 < t.tokens.size()) add(t.tokens[i] + " " + t.tokens[i + 1]);
    }

    SparseVec v;
    double norm_sq = 0;
    for (const auto& [col, count] : counts) {
        double w = count * m.idf[col];
        v.emplace_back(col, w);
        norm_sq += w * w;
    }
    if (norm_sq > 0) {
        double inv = 1.0 / std::sqrt(norm_sq);
        for (auto& [col, w] : v) w *= inv;
    }
    return v;
}

namespace {

std::vector<std::pair<std::string, std::string>> read_tsv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open lexicon: " + path);
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw std::runtime_error("malformed lexicon line: " + line);
        }
        out.emplace_back(line.substr(0, tab), line.substr(tab + 1));
    }
    return out;
}

}  // namespace

PosLexicon load_pos_lexicon(const std::string& path) {
    PosLexicon lex;
    for (const auto& [word, tag] : read_tsv(path)) {
        if (tag == "N") lex[word] = PosTag::Noun;
        else if (tag == "V") lex[word] = PosTag::Verb;
        else if (tag == "A") lex[word] = PosTag::Adj;
        else if (tag == "O") lex[word] = PosTag::Other;
        else throw std::runtime_error("bad POS tag '" + tag + "' for " + word);
    }
    return lex;
}

SynonymLexicon load_synonym_lexicon(const std::string& path) {
    SynonymLexicon lex;
    for (const auto& [word, syns] : read_tsv(path)) {
        std::set<std::string> synset{word};  // head word always included
        std::istringstream ss(syns);
        std::string syn;
        while (std::getline(ss, syn, ',')) {
            if (!syn.empty()) synset.insert(syn);
        }
        lex[word] = std::move(synset);
    }
    return lex;
}

}  // namespace meme::text
