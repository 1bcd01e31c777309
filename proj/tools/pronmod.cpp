// pronmod: trainable pronunciation modeling toolkit.
//
// Subcommands cover the pipeline end to end: lexicon build/lookup, letter
// and lexical/postlexical alignment, corpus synthesis, g2p and postlex
// training and prediction, and the evaluation metrics.

#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "pronmod/alignment.hpp"
#include "pronmod/corpus.hpp"
#include "pronmod/errors.hpp"
#include "pronmod/evalkit.hpp"
#include "pronmod/io.hpp"
#include "pronmod/lexicon.hpp"
#include "pronmod/net.hpp"
#include "pronmod/phonematizer.hpp"
#include "pronmod/phonology.hpp"
#include "pronmod/postlex.hpp"
#include "pronmod/rules.hpp"

using namespace pronmod;

namespace {

// Key=value config file; CLI flag > config file > built-in default. Every
// resolved value is echoed into the run manifest.
struct Config {
    std::map<std::string, std::string> values;

    static Config load(const std::string& path) {
        Config c;
        if (path.empty()) return c;
        std::istringstream in(io::readFile(path));
        std::string line;
        size_t n = 0;
        while (std::getline(in, line)) {
            ++n;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line[0] == '#') continue;
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ParseError(path + ":" + std::to_string(n) + ": want key=value");
            c.values[line.substr(0, eq)] = line.substr(eq + 1);
        }
        return c;
    }

    template <typename T>
    T resolve(const CLI::Option* cliOpt, const std::string& key, T cliValue) const {
        if (cliOpt && cliOpt->count() > 0) return cliValue; // explicit flag wins
        auto it = values.find(key);
        if (it == values.end()) return cliValue; // built-in default
        std::istringstream ss(it->second);
        T out;
        ss >> out;
        if (ss.fail()) throw ParseError("config value for '" + key + "' is not usable");
        return out;
    }
};

struct CommonPaths {
    std::string inventory = "data/inventory.tsv";
    std::string letters = "data/letters.tsv";
    std::string allophones = "data/allophones.tsv";
    std::string functionWords = "data/function_words.txt";
};

void addCommonPaths(CLI::App* cmd, CommonPaths& paths) {
    cmd->add_option("--inventory", paths.inventory, "phone inventory file");
    cmd->add_option("--letters", paths.letters, "letter model file");
    cmd->add_option("--allophones", paths.allophones, "allophone cost table");
    cmd->add_option("--function-words", paths.functionWords, "closed-class word list");
}

Hyperparams resolveHyper(const Config& cfg, const std::map<std::string, const CLI::Option*>& opts,
                         Hyperparams h) {
    h.learningRate = cfg.resolve(opts.at("lr"), "learning_rate", h.learningRate);
    h.lrDecay = cfg.resolve(opts.at("decay"), "lr_decay", h.lrDecay);
    h.epochs = cfg.resolve(opts.at("epochs"), "epochs", h.epochs);
    h.batchSize = cfg.resolve(opts.at("batch"), "batch_size", h.batchSize);
    h.seed = cfg.resolve(opts.at("seed"), "seed", h.seed);
    h.l2 = cfg.resolve(opts.at("l2"), "l2", h.l2);
    size_t hidden = cfg.resolve(opts.at("hidden"), "hidden",
                                h.hiddenSizes.empty() ? 0 : h.hiddenSizes[0]);
    h.hiddenSizes = hidden == 0 ? std::vector<size_t>{} : std::vector<size_t>{hidden};
    return h;
}

void manifestHyper(io::Manifest& m, const Hyperparams& h) {
    m.set("learning_rate", h.learningRate);
    m.set("lr_decay", h.lrDecay);
    m.set("epochs", static_cast<long long>(h.epochs));
    m.set("batch_size", static_cast<long long>(h.batchSize));
    m.set("hidden", static_cast<long long>(h.hiddenSizes.empty() ? 0 : h.hiddenSizes[0]));
    m.set("seed", static_cast<long long>(h.seed));
    m.set("l2", h.l2);
}

std::vector<std::string> splitTokens(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream ss(s);
    std::string t;
    while (ss >> t) out.push_back(t);
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"trainable pronunciation modeling toolkit"};
    app.require_subcommand(1);

    // ------------------------------------------------------------ lexicon
    auto* lexicon = app.add_subcommand("lexicon", "build and query the pronunciation lexicon");
    lexicon->require_subcommand(1);

    auto* lexBuild = lexicon->add_subcommand("build", "merge source lexica under a policy");
    std::vector<std::string> buildSources;
    std::string buildPolicy, buildOut;
    CommonPaths lexBuildPaths;
    lexBuild->add_option("--sources", buildSources, "source lexicon files (A B C order)")
        ->required()
        ->expected(1, 3);
    lexBuild->add_option("--policy", buildPolicy, "variant selection policy file")->required();
    lexBuild->add_option("--out", buildOut, "merged lexicon output")->required();
    addCommonPaths(lexBuild, lexBuildPaths);

    auto* lexLookup = lexicon->add_subcommand("lookup", "look up a word");
    std::string lookupLex, lookupWord, lookupTag;
    CommonPaths lexLookupPaths;
    lexLookup->add_option("--lex", lookupLex, "lexicon file")->required();
    lexLookup->add_option("--word", lookupWord, "orthographic word")->required();
    auto* lookupTagOpt = lexLookup->add_option("--tag", lookupTag, "disambiguating tag");
    addCommonPaths(lexLookup, lexLookupPaths);

    // ------------------------------------------------------------ align
    auto* alignCmd = app.add_subcommand("align", "minimal-cost alignment of two symbol strings");
    std::string alignMode, alignSrc, alignDst;
    CommonPaths alignPaths;
    alignCmd->add_option("--mode", alignMode, "letters|postlex")
        ->required()
        ->check(CLI::IsMember({"letters", "postlex"}));
    alignCmd->add_option("--src", alignSrc, "source sequence (word for letters mode)")->required();
    alignCmd->add_option("--dst", alignDst, "target phone sequence")->required();
    addCommonPaths(alignCmd, alignPaths);

    // ------------------------------------------------------------ corpus
    auto* corpusCmd = app.add_subcommand("corpus", "corpus operations");
    corpusCmd->require_subcommand(1);
    auto* synth = corpusCmd->add_subcommand("synth", "synthesize a labeled corpus from prompts");
    std::string synthPrompts, synthRules, synthLex, synthOut;
    uint64_t synthSeed = 1;
    CommonPaths synthPaths;
    synth->add_option("--prompts", synthPrompts, "prompt sentence file")->required();
    synth->add_option("--rules", synthRules, "rule oracle file")->required();
    synth->add_option("--lex", synthLex, "lexicon file")->required();
    synth->add_option("--seed", synthSeed, "random seed");
    synth->add_option("--out", synthOut, "output label directory")->required();
    addCommonPaths(synth, synthPaths);

    // ------------------------------------------------------------ g2p
    auto* g2p = app.add_subcommand("g2p", "letter-to-sound phonematizer");
    g2p->require_subcommand(1);

    auto* g2pTrain = g2p->add_subcommand("train", "train on a lexicon");
    std::string g2pLex, g2pOut, g2pConfig;
    size_t g2pWindow = 7;
    Hyperparams g2pHyper;
    CommonPaths g2pPaths;
    g2pTrain->add_option("--lex", g2pLex, "training lexicon")->required();
    g2pTrain->add_option("--out", g2pOut, "model output path")->required();
    g2pTrain->add_option("--config", g2pConfig, "key=value config file");
    auto* g2pWindowOpt = g2pTrain->add_option("--window", g2pWindow, "letter window (odd)");
    std::map<std::string, const CLI::Option*> g2pOpts;
    g2pOpts["lr"] = g2pTrain->add_option("--lr", g2pHyper.learningRate, "learning rate");
    g2pOpts["decay"] = g2pTrain->add_option("--decay", g2pHyper.lrDecay, "per-epoch lr decay");
    g2pOpts["epochs"] = g2pTrain->add_option("--epochs", g2pHyper.epochs, "training epochs");
    g2pOpts["batch"] = g2pTrain->add_option("--batch", g2pHyper.batchSize, "minibatch size");
    g2pOpts["seed"] = g2pTrain->add_option("--seed", g2pHyper.seed, "random seed");
    g2pOpts["l2"] = g2pTrain->add_option("--l2", g2pHyper.l2, "L2 penalty");
    g2pOpts["hidden"] = g2pTrain->add_option("--hidden", g2pHyper.hiddenSizes[0], "hidden width");
    addCommonPaths(g2pTrain, g2pPaths);

    auto* g2pPredict = g2p->add_subcommand("predict", "pronounce a word");
    std::string g2pModel, g2pWord;
    CommonPaths g2pPredictPaths;
    g2pPredict->add_option("--model", g2pModel, "model path")->required();
    g2pPredict->add_option("--word", g2pWord, "word to pronounce")->required();
    addCommonPaths(g2pPredict, g2pPredictPaths);

    // ------------------------------------------------------------ postlex
    auto* postlexCmd = app.add_subcommand("postlex", "lexical-to-postlexical converter");
    postlexCmd->require_subcommand(1);

    auto* plTrain = postlexCmd->add_subcommand("train", "train on a labeled corpus");
    std::string plCorpus, plLex, plOut, plConfig;
    size_t plWindow = 9;
    size_t plTrainWords = 3550, plTestWords = 405;
    uint64_t plSplitSeed = 7;
    Hyperparams plHyper;
    CommonPaths plPaths;
    plTrain->add_option("--corpus", plCorpus, "label directory")->required();
    plTrain->add_option("--lex", plLex, "lexicon file")->required();
    plTrain->add_option("--out", plOut, "model output path")->required();
    plTrain->add_option("--config", plConfig, "key=value config file");
    auto* plWindowOpt = plTrain->add_option("--window", plWindow, "phone window (odd)");
    auto* plTrainWordsOpt = plTrain->add_option("--train-words", plTrainWords, "train split size");
    auto* plTestWordsOpt = plTrain->add_option("--test-words", plTestWords, "test split size");
    auto* plSplitSeedOpt = plTrain->add_option("--split-seed", plSplitSeed, "split seed");
    std::map<std::string, const CLI::Option*> plOpts;
    plOpts["lr"] = plTrain->add_option("--lr", plHyper.learningRate, "learning rate");
    plOpts["decay"] = plTrain->add_option("--decay", plHyper.lrDecay, "per-epoch lr decay");
    plOpts["epochs"] = plTrain->add_option("--epochs", plHyper.epochs, "training epochs");
    plOpts["batch"] = plTrain->add_option("--batch", plHyper.batchSize, "minibatch size");
    plOpts["seed"] = plTrain->add_option("--seed", plHyper.seed, "random seed");
    plOpts["l2"] = plTrain->add_option("--l2", plHyper.l2, "L2 penalty");
    plOpts["hidden"] = plTrain->add_option("--hidden", plHyper.hiddenSizes[0], "hidden width");
    addCommonPaths(plTrain, plPaths);

    auto* plPredict = postlexCmd->add_subcommand("predict", "convert a sentence");
    std::string plpModel, plpLex, plpSentence;
    CommonPaths plpPaths;
    plPredict->add_option("--model", plpModel, "model path")->required();
    plPredict->add_option("--lex", plpLex, "lexicon file")->required();
    plPredict->add_option("--sentence", plpSentence, "sentence text")->required();
    addCommonPaths(plPredict, plpPaths);

    // ------------------------------------------------------------ eval
    auto* evalCmd = app.add_subcommand("eval", "evaluation metrics");
    std::string evalMetric, evalCorpus, evalModel, evalLex, evalProbes;
    size_t evalTrainWords = 3550, evalTestWords = 405;
    uint64_t evalSplitSeed = 7;
    CommonPaths evalPaths;
    evalCmd->add_option("--metric", evalMetric,
                        "identity|accuracy|table:/d/|table:/t/|probes")->required();
    evalCmd->add_option("--corpus", evalCorpus, "label directory");
    evalCmd->add_option("--model", evalModel, "postlex model path");
    evalCmd->add_option("--lex", evalLex, "lexicon file");
    evalCmd->add_option("--probes", evalProbes, "probe case file");
    evalCmd->add_option("--train-words", evalTrainWords, "train split size");
    evalCmd->add_option("--test-words", evalTestWords, "test split size");
    evalCmd->add_option("--split-seed", evalSplitSeed, "split seed");
    addCommonPaths(evalCmd, evalPaths);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    try {
        if (lexBuild->parsed()) {
            auto inv = PhoneInventory::loadFile(lexBuildPaths.inventory);
            auto policy = MergePolicy::loadFile(buildPolicy);
            Lexicon lex = mergeLexica(buildSources, policy, inv);
            saveLexicon(lex, buildOut, inv);
            io::Manifest m;
            for (size_t i = 0; i < buildSources.size(); ++i)
                m.set("source_" + std::string(1, static_cast<char>('a' + i)), buildSources[i]);
            m.set("policy", buildPolicy);
            m.set("entries", static_cast<long long>(lex.entryCount()));
            m.set("words", static_cast<long long>(lex.wordCount()));
            m.save(buildOut + ".manifest");
            std::cout << "wrote " << lex.entryCount() << " entries for " << lex.wordCount()
                      << " words to " << buildOut << "\n";
        } else if (lexLookup->parsed()) {
            auto inv = PhoneInventory::loadFile(lexLookupPaths.inventory);
            Lexicon lex = loadLexicon(lookupLex, inv);
            std::optional<std::string> tag;
            if (lookupTagOpt->count()) tag = lookupTag;
            for (const auto& e : lex.lookup(lookupWord, tag)) {
                std::cout << e.orthography << "\t" << (e.tag.empty() ? "-" : e.tag) << "\t"
                          << inv.render(e.pronunciation) << "\t" << lexSourceLetter(e.source)
                          << "\trank" << e.variantRank << "\n";
            }
        } else if (alignCmd->parsed()) {
            auto inv = PhoneInventory::loadFile(alignPaths.inventory);
            std::vector<std::string> src, dst = splitTokens(alignDst);
            CostModel model;
            LetterModelSet letters;
            AllophoneCosts allo;
            if (alignMode == "letters") {
                letters = LetterModelSet::loadFile(alignPaths.letters, inv);
                model = makeLetterPhoneModel(letters, inv);
                std::string word;
                for (const auto& t : splitTokens(alignSrc)) word += t;
                for (char c : word) src.push_back(std::string(1, c));
            } else {
                allo = AllophoneCosts::loadFile(alignPaths.allophones, inv);
                model = makeLexPostlexModel(allo, inv);
                src = splitTokens(alignSrc);
            }
            Alignment a = align(src, dst, model);
            for (const auto& step : a.steps) {
                std::string left = step.src ? src[*step.src] : "-";
                std::string right = step.dst ? dst[*step.dst] : "-";
                const char* kind = step.isSubstitution() ? (left == right ? "match" : "sub")
                                   : step.isDeletion()   ? "del"
                                                         : "ins";
                std::cout << left << "\t" << right << "\t" << kind << "\n";
            }
            std::cout << "cost\t" << a.totalCost << "\n";
        } else if (synth->parsed()) {
            auto inv = PhoneInventory::loadFile(synthPaths.inventory);
            Lexicon lex = loadLexicon(synthLex, inv);
            auto oracle = RuleOracle::loadFile(synthRules, inv);
            auto prompts = loadPrompts(synthPrompts);
            auto functionWords = loadFunctionWords(synthPaths.functionWords);
            Corpus corpus = synthesizeCorpus(lex, prompts, oracle, functionWords, synthSeed);
            saveCorpus(corpus, synthOut, inv);
            io::Manifest m;
            m.set("prompts", synthPrompts);
            m.set("rules", synthRules);
            m.set("lexicon", synthLex);
            m.set("seed", static_cast<long long>(synthSeed));
            m.set("utterances", static_cast<long long>(corpus.utterances.size()));
            m.set("words", static_cast<long long>(corpus.wordCount()));
            m.save(synthOut + "/manifest.txt");
            std::cout << "wrote " << corpus.utterances.size() << " utterances, "
                      << corpus.wordCount() << " words to " << synthOut << "\n";
        } else if (g2pTrain->parsed()) {
            auto inv = PhoneInventory::loadFile(g2pPaths.inventory);
            auto letters = LetterModelSet::loadFile(g2pPaths.letters, inv);
            Lexicon lex = loadLexicon(g2pLex, inv);
            Config cfg = Config::load(g2pConfig);
            Hyperparams hyper = resolveHyper(cfg, g2pOpts, g2pHyper);
            size_t window = cfg.resolve(g2pWindowOpt, "window", g2pWindow);
            LetterEncoder encoder(letters, inv, window);
            G2PDataset ds = buildG2PDataset(lex, letters, inv, encoder);
            G2PModel model = trainPhonematizer(ds, encoder, hyper);
            saveG2PModel(model, g2pOut);
            io::Manifest m;
            m.set("lexicon", g2pLex);
            m.set("window", static_cast<long long>(window));
            manifestHyper(m, hyper);
            m.set("examples", static_cast<long long>(ds.examples.size()));
            m.set("labels", static_cast<long long>(ds.labels.size()));
            m.set("skipped_entries", static_cast<long long>(ds.skippedEntries));
            m.save(g2pOut + ".manifest");
            std::cout << "trained on " << ds.examples.size() << " letter examples, "
                      << ds.labels.size() << " labels -> " << g2pOut << "\n";
        } else if (g2pPredict->parsed()) {
            auto inv = PhoneInventory::loadFile(g2pPredictPaths.inventory);
            auto letters = LetterModelSet::loadFile(g2pPredictPaths.letters, inv);
            G2PModel model = loadG2PModel(g2pModel, inv);
            auto pron = phonematize(model, g2pWord, letters, inv);
            std::cout << inv.render(pron) << "\n";
        } else if (plTrain->parsed()) {
            auto inv = PhoneInventory::loadFile(plPaths.inventory);
            auto costs = AllophoneCosts::loadFile(plPaths.allophones, inv);
            Lexicon lex = loadLexicon(plLex, inv);
            Config cfg = Config::load(plConfig);
            Hyperparams hyper = resolveHyper(cfg, plOpts, plHyper);
            size_t window = cfg.resolve(plWindowOpt, "window", plWindow);
            size_t trainWords = cfg.resolve(plTrainWordsOpt, "train_words", plTrainWords);
            size_t testWords = cfg.resolve(plTestWordsOpt, "test_words", plTestWords);
            uint64_t splitSeed = cfg.resolve(plSplitSeedOpt, "split_seed", plSplitSeed);

            Corpus corpus = loadCorpus(plCorpus, inv);
            resolveLexical(corpus, lex);
            Corpus split = splitCorpus(corpus, trainWords, testWords, splitSeed);
            ContextSpec spec(inv, window);
            PostlexDataset ds = buildPostlexDataset(split.subset(Split::Train), inv, costs, spec);
            PostlexModel model = trainPostlex(ds, hyper);
            model.spec = spec;
            savePostlexModel(model, plOut);

            ChunkAccuracy heldOut = chunkAccuracy(model, split.subset(Split::Test), inv, costs);
            io::Manifest m;
            m.set("corpus", plCorpus);
            m.set("lexicon", plLex);
            m.set("window", static_cast<long long>(window));
            m.set("train_words", static_cast<long long>(trainWords));
            m.set("test_words", static_cast<long long>(testWords));
            m.set("split_seed", static_cast<long long>(splitSeed));
            manifestHyper(m, hyper);
            m.set("examples", static_cast<long long>(ds.examples.size()));
            m.set("labels", static_cast<long long>(ds.labels.size()));
            m.set("heldout_chunk_accuracy", heldOut.rate());
            m.save(plOut + ".manifest");
            std::cout << "trained on " << ds.examples.size() << " phone examples, "
                      << ds.labels.size() << " labels -> " << plOut << "\n";
            std::cout << "held-out chunk accuracy " << heldOut.correct << "/" << heldOut.total
                      << " = " << heldOut.rate() << "\n";
        } else if (plPredict->parsed()) {
            auto inv = PhoneInventory::loadFile(plpPaths.inventory);
            Lexicon lex = loadLexicon(plpLex, inv);
            auto functionWords = loadFunctionWords(plpPaths.functionWords);
            PostlexModel model = loadPostlexModel(plpModel, inv);
            Utterance utt = buildProbeUtterance(plpSentence, lex, functionWords);
            auto words = postlexicalize(model, utt, inv);
            for (size_t w = 0; w < words.size(); ++w) {
                std::cout << utt.words[w].orthography << "\t" << inv.render(words[w]) << "\n";
            }
        } else if (evalCmd->parsed()) {
            auto inv = PhoneInventory::loadFile(evalPaths.inventory);
            auto costs = AllophoneCosts::loadFile(evalPaths.allophones, inv);
            auto needCorpus = [&]() {
                if (evalCorpus.empty()) throw NotFoundError("--corpus is required for this metric");
                Corpus c = loadCorpus(evalCorpus, inv);
                if (evalLex.empty()) throw NotFoundError("--lex is required for this metric");
                Lexicon lex = loadLexicon(evalLex, inv);
                resolveLexical(c, lex);
                return c;
            };
            if (evalMetric == "identity") {
                Corpus c = needCorpus();
                std::cout << "identity_rate\t" << identityRate(c, inv, costs) << "\n";
            } else if (evalMetric == "accuracy") {
                Corpus c = needCorpus();
                if (evalModel.empty()) throw NotFoundError("--model is required for accuracy");
                PostlexModel model = loadPostlexModel(evalModel, inv);
                Corpus split = splitCorpus(c, evalTrainWords, evalTestWords, evalSplitSeed);
                ChunkAccuracy acc = chunkAccuracy(model, split.subset(Split::Test), inv, costs);
                std::cout << "heldout_chunk_accuracy\t" << acc.rate() << "\t(" << acc.correct
                          << "/" << acc.total << ")\n";
            } else if (evalMetric.rfind("table:", 0) == 0) {
                std::string phone = evalMetric.substr(6);
                if (phone.size() >= 2 && phone.front() == '/' && phone.back() == '/')
                    phone = phone.substr(1, phone.size() - 2);
                Corpus c = needCorpus();
                RealizationTable t = realizationTable(c, phone, inv, costs);
                std::cout << t.renderText() << "\n" << t.renderTsv();
            } else if (evalMetric == "probes") {
                if (evalModel.empty() || evalLex.empty() || evalProbes.empty())
                    throw NotFoundError("probes metric needs --model, --lex and --probes");
                Lexicon lex = loadLexicon(evalLex, inv);
                auto functionWords = loadFunctionWords(evalPaths.functionWords);
                PostlexModel model = loadPostlexModel(evalModel, inv);
                auto probes = loadProbes(evalProbes);
                ProbeReport report = phenomenaProbe(model, probes, lex, functionWords, inv);
                std::cout << report.renderText();
            } else {
                throw ParseError("unknown metric '" + evalMetric + "'");
            }
        }
    } catch (const Error& e) {
        std::cerr << "ERR " << e.code() << " " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "ERR Internal " << e.what() << "\n";
        return 1;
    }
    return 0;
}
