#pragma once

#include "classdeg/triple.hpp"

#include <string>

inline classdeg::FactorTriple fixture(const std::string &name) {
    return classdeg::read_triple_file(std::string(CLASSDEG_FIXTURE_DIR) + "/" + name + ".triple");
}

inline std::string fixture_path(const std::string &file) {
    return std::string(CLASSDEG_FIXTURE_DIR) + "/" + file;
}

inline classdeg::Word xw(const classdeg::FactorTriple &t, const std::string &letters) {
    classdeg::Word w;
    for (char c : letters)
        w.push_back(*t.x().find(std::string(1, c)));
    return w;
}

inline classdeg::Word yw(const classdeg::FactorTriple &t, const std::string &letters) {
    classdeg::Word w;
    for (char c : letters)
        w.push_back(*t.find_y(std::string(1, c)));
    return w;
}
