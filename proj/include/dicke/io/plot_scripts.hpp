#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dicke/error.hpp"
#include "dicke/io/csv.hpp"

namespace dicke::io {

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
}

/// gnuplot script: one (q, p) section panel per energy on a grid with four
/// columns, points colored by trajectory.
[[nodiscard]] inline std::string poincare_plot_script(const std::vector<std::string>& files,
                                                      const std::vector<double>& energies) {
  const std::size_t cols = 4, rows = (files.size() + cols - 1) / cols;
  std::ostringstream s;
  s << "# gnuplot script, run from the output directory: gnuplot poincare.gp\n"
    << "set datafile separator ','\n"
    << "set terminal pngcairo size " << 400 * cols << "," << 380 * rows << "\n"
    << "set output 'poincare.png'\n"
    << "set multiplot layout " << rows << "," << cols << "\n"
    << "set xlabel 'q'\nset ylabel 'p'\nunset key\n";
  for (std::size_t i = 0; i < files.size(); ++i) {
    s << "set title '(" << static_cast<char>('a' + i % 26) << ") eps = " << format_label(energies[i]) << "'\n"
      << "plot '" << files[i] << "' every ::1 using 3:4:1 with dots lc variable\n";
  }
  s << "unset multiplot\n";
  return s.str();
}

/// gnuplot script: one Peres lattice panel per observable, colored by well
/// (left blue, right red, otherwise purple), with the two critical energies.
[[nodiscard]] inline std::string peres_plot_script(const std::string& file, const std::vector<std::string>& observables,
                                                   double eps_c1, double eps_c2) {
  std::ostringstream s;
  s << "# gnuplot script, run from the output directory: gnuplot peres.gp\n"
    << "set datafile separator ','\n"
    << "set terminal pngcairo size " << 420 * observables.size() << ",400\n"
    << "set output 'peres.png'\n"
    << "set multiplot layout 1," << observables.size() << "\n"
    << "set xlabel 'eps'\nunset key\n"
    << "color(w) = w eq 'left' ? 0x1f4fd8 : (w eq 'right' ? 0xd81f1f : 0x8e44ad)\n"
    << "set arrow 1 from " << format_double(eps_c1) << ", graph 0 to " << format_double(eps_c1)
    << ", graph 1 nohead dt 2\n"
    << "set arrow 2 from " << format_double(eps_c2) << ", graph 0 to " << format_double(eps_c2)
    << ", graph 1 nohead dt 2\n";
  for (std::size_t i = 0; i < observables.size(); ++i) {
    const auto& o = observables[i];
    s << "set title '(" << static_cast<char>('a' + i % 26) << ") " << o << "'\nset ylabel '" << o << "'\n"
      << "plot '" << file << "' every ::1 using 2:(strcol(3) eq '" << o
      << "' ? $4 : NaN):(color(strcol(5))) with points pt 7 ps 0.3 lc rgb variable\n";
  }
  s << "unset multiplot\n";
  return s.str();
}

}  // namespace dicke::io
