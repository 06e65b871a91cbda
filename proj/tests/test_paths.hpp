#pragma once

#include <string>

#ifndef ADELIC_TEST_DATA_DIR
#define ADELIC_TEST_DATA_DIR "tests/data"
#endif

inline std::string data_path(const std::string& rel) {
    return std::string(ADELIC_TEST_DATA_DIR) + "/" + rel;
}
