// Test fixture helper: writes a grid template keypoint file.
// Usage: make_template <out-path> [cols rows spacing seed]

#include <cstdio>
#include <cstdlib>
#include <iostream>

#include "trigrow/errors.hpp"
#include "trigrow/io.hpp"
#include "trigrow/synth.hpp"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: make_template <out-path> [cols rows spacing seed]\n";
    return 1;
  }
  const int cols = argc > 2 ? std::atoi(argv[2]) : 10;
  const int rows = argc > 3 ? std::atoi(argv[3]) : 10;
  const double spacing = argc > 4 ? std::atof(argv[4]) : 20.0;
  const std::uint64_t seed = argc > 5 ? std::strtoull(argv[5], nullptr, 10) : 7;
  try {
    const trigrow::KeyPointSet templ =
        trigrow::make_grid_template(cols, rows, spacing, seed);
    trigrow::save_keypoints(argv[1], templ);
    std::printf("%zu keypoints -> %s\n", templ.size(), argv[1]);
  } catch (const trigrow::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const trigrow::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
