#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace meme::text {

/// Lowercased tokens with URLs, @-mentions and punctuation stripped.
struct CleanText {
    std::vector<std::string> tokens;
};

enum class PosTag { Noun, Verb, Adj, Other };

using PosLexicon = std::map<std::string, PosTag>;
using SynonymLexicon = std::map<std::string, std::set<std::string>>;

struct StylisticFeatures {
    int n_words = 0;
    int n_noun = 0, n_verb = 0, n_adj = 0;
    double r_noun = 0, r_verb = 0, r_adj = 0;
};

struct AmbiguityFeatures {
    double mean_synset_len = 0;
    int max_synset_len = 0;
    double synset_gap = 0;
};

struct TfidfModel {
    std::map<std::string, int> vocabulary;  // n-gram -> dense column index
    std::vector<double> idf;                // per column
    long n_docs = 0;
    int dim() const { return static_cast<int>(idf.size()); }
};

/// Sparse vector sorted by column index.
using SparseVec = std::vector<std::pair<int, double>>;

struct LengthMismatch : std::runtime_error {
    LengthMismatch() : std::runtime_error("token/tag length mismatch") {}
};
struct EmptyCorpus : std::runtime_error {
    EmptyCorpus() : std::runtime_error("tfidf corpus is empty") {}
};

CleanText preprocess(const std::string& raw);

std::vector<PosTag> pos_tag(const CleanText& t, const PosLexicon& lexicon);

StylisticFeatures stylistic_features(const CleanText& t, const std::vector<PosTag>& tags);

AmbiguityFeatures ambiguity_features(const CleanText& t, const SynonymLexicon& lex);

TfidfModel fit_tfidf(const std::vector<CleanText>& corpus, int min_df = 1);

/// Count * idf, L2-normalized; OOV n-grams ignored, zero vector stays zero.
SparseVec transform_tfidf(const TfidfModel& m, const CleanText& t);

/// Lexicon file formats (UTF-8 TSV):
///   POS:      word<TAB>tag          with tag in {N,V,A,O}
///   synonyms: word<TAB>syn1,syn2,...
PosLexicon load_pos_lexicon(const std::string& path);
SynonymLexicon load_synonym_lexicon(const std::string& path);

}  // namespace meme::text
