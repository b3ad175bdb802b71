// Library walk-through on the bundled demo corpora: train, extract, then
// contrast the two subgroups.
//
//   contrast_sample [data-dir]

#include <iostream>
#include <string>

#include "pukit/pukit.hpp"

int main(int argc, char** argv) {
  const std::string data = argc > 1 ? argv[1] : "data";
  try {
    const pukit::Corpus happy = pukit::load_corpus(data + "/demo/happy.jsonl");
    const pukit::Corpus mixed = pukit::load_corpus(data + "/demo/mixed.jsonl");
    const pukit::Lexicon lexicon = pukit::load_lexicon(data + "/demo_lexicon.txt");

    // Hold out most subjects so extraction runs on users the model never saw.
    const auto split = pukit::split_by_subjects(mixed, 5);
    const pukit::PUDataset ds = pukit::assemble_pu_dataset(
        happy, split.training, {50000, 50000, 1}, pukit::FeaturizerConfig::hashed(4096));
    const pukit::PUModel model = pukit::elkanoto_fit(ds, pukit::SvmHyperparams{}, 0.2, 1);
    std::cout << "trained on " << ds.size() << " rows, c = " << pukit::format_fixed(model.c, 3) << "\n";

    const pukit::ExtractionResult moments = pukit::extract_moments(model, split.validation, 0.5);
    std::cout << "extracted " << moments.rows.size() << " of " << split.validation.size()
              << " sentences\n";
    for (std::size_t i = 0; i < 3 && i < moments.rows.size(); ++i) {
      std::cout << "  " << pukit::format_fixed(moments.rows[i].probability, 3) << "  "
                << moments.rows[i].text << "\n";
    }

    const auto dep = pukit::build_stats(moments, split.validation, pukit::Subgroup::depression);
    const auto ctl = pukit::build_stats(moments, split.validation, pukit::Subgroup::control);

    std::cout << "\ndominance, depression over control\n";
    for (const auto& row : pukit::dominance_table(dep, ctl, lexicon)) {
      std::cout << "  " << row.category << "  "
                << (row.dominance ? pukit::format_fixed(*row.dominance, 2) : "undefined") << "\n";
    }

    std::cout << "\nkey nouns\n";
    const auto nouns = pukit::keyness_g2(dep, ctl, pukit::Pos::NOUN);
    for (const auto dir : {pukit::KeyDirection::target, pukit::KeyDirection::reference}) {
      std::cout << (dir == pukit::KeyDirection::target ? "  depression:" : "  control:   ");
      for (const auto& r : pukit::top_keywords(nouns, dir, 5)) std::cout << ' ' << r.lemma;
      std::cout << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
