#include "meme/fixtures.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include "meme/corpus.hpp"
#include "meme/csv.hpp"
#include "meme/image_io.hpp"
#include "meme/rng.hpp"

namespace meme::fixtures {

namespace {

namespace fs = std::filesystem;

// word pools keyed loosely to labels so the trained models have signal
const std::vector<std::string> kFillerWords = {
    "the",  "a",    "this", "that", "meme", "picture", "caption", "cat",
    "dog",  "day",  "life", "work", "new",  "old",     "big",     "little"};

const std::vector<std::vector<std::string>> kSentimentWords = {
    {"awful", "terrible", "sad", "angry"},
    {"okay", "plain", "normal", "fine"},
    {"great", "awesome", "happy", "lovely"}};

const std::vector<std::vector<std::string>> kHumourWords = {
    {"boring", "flat"},
    {"funny", "amusing"},
    {"hilarious", "ridiculous"},
    {"sidesplitting", "outrageous"}};

const std::vector<std::vector<std::string>> kSarcasmWords = {
    {"direct", "plain"}, {"ironic", "wry"}, {"twisted", "layered"}, {"absurd", "inverted"}};

const std::vector<std::vector<std::string>> kOffensiveWords = {
    {"kind", "gentle"}, {"edgy", "rude"}, {"nasty", "harsh"}, {"hateful", "vile"}};

const std::vector<std::vector<std::string>> kMotivationalWords = {
    {"idle", "aimless"}, {"inspiring", "uplifting"}};

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write fixture file: " + path.string());
    out << content;
}

img::PixelGrid make_image(std::mt19937_64& g, int variant) {
    std::uniform_int_distribution<int> channel(0, 255);
    img::PixelGrid grid;
    grid.width = 16;
    grid.height = 16;
    grid.pixels.resize(256);
    img::Rgb a{static_cast<uint8_t>(channel(g)), static_cast<uint8_t>(channel(g)),
               static_cast<uint8_t>(channel(g))};
    if (variant % 2 == 0) {
        for (auto& px : grid.pixels) px = a;
    } else {
        img::Rgb b{static_cast<uint8_t>(channel(g)), static_cast<uint8_t>(channel(g)),
                   static_cast<uint8_t>(channel(g))};
        for (int y = 0; y < 16; ++y) {
            for (int x = 0; x < 16; ++x) {
                grid.pixels[y * 16 + x] = ((x + y) % 2 == 0) ? a : b;
            }
        }
    }
    return grid;
}

}  // namespace

void generate(const std::string& out_dir, uint64_t seed) {
    fs::create_directories(out_dir);
    fs::create_directories(fs::path(out_dir) / "images");

    auto schemas = corpus::full_schemas();

    // --- corpus.csv + images + emotion.csv -----------------------------
    std::string corpus_csv =
        "id,image,text,sentiment,humour,sarcasm,offensive,motivational\n";
    std::string emotion_csv = "id,angry,disgusted,fearful,happy,neutral,sad,surprised\n";

    for (int i = 0; i < 40; ++i) {
        auto g = rng::make(rng::mix(seed, static_cast<uint64_t>(i)));
        std::uniform_int_distribution<size_t> filler(0, kFillerWords.size() - 1);

        int sentiment = i % 3;
        int humour = i % 4;
        int sarcasm = (i / 4) % 4;
        int offensive = (i / 2) % 4;
        int motivational = (i / 5) % 2;

        std::string text;
        auto add_from = [&](const std::vector<std::string>& pool) {
            std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
            if (!text.empty()) text += ' ';
            text += pool[pick(g)];
        };
        int n_filler = 3 + static_cast<int>(g() % 4);
        for (int w = 0; w < n_filler; ++w) add_from(kFillerWords);
        add_from(kSentimentWords[sentiment]);
        add_from(kHumourWords[humour]);
        add_from(kSarcasmWords[sarcasm]);
        add_from(kOffensiveWords[offensive]);
        add_from(kMotivationalWords[motivational]);

        std::string id = "meme" + std::to_string(i);
        std::string image_name;
        if (i % 5 != 4) {  // a few samples deliberately have no image
            image_name = id + ".png";
            io::write_png((fs::path(out_dir) / "images" / image_name).string(),
                          make_image(g, i));
        }

        corpus_csv += csv::format_row({id, image_name, text,
                                       schemas[0].levels[sentiment],
                                       schemas[1].levels[humour],
                                       schemas[2].levels[sarcasm],
                                       schemas[3].levels[offensive],
                                       schemas[4].levels[motivational]});

        if (i % 3 != 2) {  // emotion vectors for most but not all samples
            double raw[7], sum = 0;
            std::uniform_real_distribution<double> unit(0.05, 1.0);
            for (double& v : raw) {
                v = unit(g);
                sum += v;
            }
            emotion_csv += id;
            char buf[32];
            for (double v : raw) {
                std::snprintf(buf, sizeof(buf), ",%.9f", v / sum);
                emotion_csv += buf;
            }
            emotion_csv += '\n';
        }
    }
    write_file(fs::path(out_dir) / "corpus.csv", corpus_csv);
    write_file(fs::path(out_dir) / "emotion.csv", emotion_csv);

    // --- lexicons ------------------------------------------------------
    write_file(fs::path(out_dir) / "pos.tsv",
               "meme\tN\npicture\tN\ncaption\tN\ncat\tN\ndog\tN\nday\tN\nlife\tN\n"
               "work\tN\nthe\tO\na\tO\nthis\tO\nthat\tO\nnew\tA\nold\tA\nbig\tA\n"
               "little\tA\nfunny\tA\nhilarious\tA\nsad\tA\nhappy\tA\ngreat\tA\n"
               "awful\tA\ninspiring\tA\nrun\tV\nlaugh\tV\nmake\tV\n");
    write_file(fs::path(out_dir) / "synonyms.tsv",
               "new\tfresh,raw,newfangled,modern,newly\n"
               "funny\tamusing,comic,comical\n"
               "great\tawesome,grand\n"
               "sad\tunhappy,gloomy\n"
               "big\tlarge,huge\n"
               "happy\tglad,joyful\n");
    write_file(fs::path(out_dir) / "paraphrases.tsv",
               "funny\tamusing|comical\n"
               "great\tawesome|grand\n"
               "hilarious\tsidesplitting\n"
               "sad\tgloomy|unhappy\n"
               "big\thuge|large\n"
               "this meme\tthis picture|this caption\n"
               "inspiring\tuplifting\n");

    // --- ratings.csv: 100 items, 4 raters over the sentiment levels ----
    {
        auto g = rng::make(rng::mix(seed, uint64_t{0xA11ce}));
        std::uniform_int_distribution<int> level(0, 2);
        std::uniform_real_distribution<double> coin(0.0, 1.0);
        std::string ratings = "item_id,gold,rater1,rater2,rater3,rater4\n";
        const auto& levels = schemas[0].levels;
        for (int i = 0; i < 100; ++i) {
            int gold = level(g);
            csv::Row row = {"item" + std::to_string(i), levels[gold]};
            for (int r = 0; r < 4; ++r) {
                int rating = (coin(g) < 0.6) ? gold : level(g);
                row.push_back(levels[rating]);
            }
            ratings += csv::format_row(row);
        }
        write_file(fs::path(out_dir) / "ratings.csv", ratings);
    }
}

}  // namespace meme::fixtures
