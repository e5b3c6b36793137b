#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "pdp/errors.hpp"
#include "pdp/sefron.hpp"

namespace pdp {

namespace {

constexpr const char* kMagic = "mlc-sefron-model 1";

std::string hex(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", x);
  return buf;
}

double parse_double(const std::string& token) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double x = std::strtod(begin, &end);
  if (end == begin || *end != '\0') throw IoError("model file: bad number '" + token + "'");
  return x;
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::string word() {
    std::string w;
    if (!(in_ >> w)) throw IoError("model file: unexpected end of input");
    return w;
  }
  void expect(const std::string& keyword) {
    const std::string w = word();
    if (w != keyword) throw IoError("model file: expected '" + keyword + "', found '" + w + "'");
  }
  double real() { return parse_double(word()); }
  long integer() {
    const std::string w = word();
    char* end = nullptr;
    const long v = std::strtol(w.c_str(), &end, 10);
    if (w.empty() || *end != '\0') throw IoError("model file: bad integer '" + w + "'");
    return v;
  }

 private:
  std::istream& in_;
};

}  // namespace

void save_network(const SefronNetwork& net, std::ostream& out) {
  const TrainingConfig& c = net.config();
  out << kMagic << "\n";
  out << "zones " << net.num_zones() << "\n";
  out << "interval " << hex(c.interval) << "\n";
  out << "input_window " << hex(c.input_window) << "\n";
  out << "ideal_firing " << hex(c.ideal_firing) << "\n";
  out << "margin " << hex(c.margin) << "\n";
  out << "tau " << hex(c.tau) << "\n";
  out << "sigma " << hex(c.sigma) << "\n";
  out << "a_plus " << hex(c.a_plus) << "\n";
  out << "a_minus " << hex(c.a_minus) << "\n";
  out << "tau_plus " << hex(c.tau_plus) << "\n";
  out << "tau_minus " << hex(c.tau_minus) << "\n";
  out << "learning_rate " << hex(c.learning_rate) << "\n";
  out << "epochs " << c.epochs << "\n";
  out << "grid_points " << c.grid_points << "\n";
  const auto neurons = net.neurons();
  for (std::size_t k = 0; k < neurons.size(); ++k) {
    out << "neuron " << k << " theta " << hex(neurons[k].theta) << "\n";
    for (std::size_t ch = 0; ch < neurons[k].incoming.size(); ++ch) {
      const auto bumps = neurons[k].incoming[ch].bumps();
      if (bumps.empty()) continue;
      out << "channel " << ch << " " << bumps.size();
      for (const Bump& b : bumps) out << " " << hex(b.center) << " " << hex(b.amplitude);
      out << "\n";
    }
  }
  out << "end\n";
  if (!out) throw IoError("model file: write failed");
}

SefronNetwork load_network(std::istream& in) {
  std::string magic;
  std::getline(in, magic);
  if (magic != kMagic) throw IoError("model file: missing '" + std::string(kMagic) + "' header");
  Reader r(in);
  r.expect("zones");
  const long m = r.integer();
  if (m < 1 || m > 100000) throw IoError("model file: zone count out of range");
  TrainingConfig c;
  r.expect("interval"), c.interval = r.real();
  r.expect("input_window"), c.input_window = r.real();
  r.expect("ideal_firing"), c.ideal_firing = r.real();
  r.expect("margin"), c.margin = r.real();
  r.expect("tau"), c.tau = r.real();
  r.expect("sigma"), c.sigma = r.real();
  r.expect("a_plus"), c.a_plus = r.real();
  r.expect("a_minus"), c.a_minus = r.real();
  r.expect("tau_plus"), c.tau_plus = r.real();
  r.expect("tau_minus"), c.tau_minus = r.real();
  r.expect("learning_rate"), c.learning_rate = r.real();
  r.expect("epochs"), c.epochs = static_cast<int>(r.integer());
  r.expect("grid_points"), c.grid_points = static_cast<int>(r.integer());
  SefronNetwork net;
  try {
    net = SefronNetwork(static_cast<int>(m), c);
  } catch (const DomainError& e) {
    throw IoError(std::string("model file: ") + e.what());
  }
  auto neurons = net.neurons();
  long current = -1;
  for (std::string w = r.word(); w != "end"; w = r.word()) {
    if (w == "neuron") {
      current = r.integer();
      if (current < 0 || current >= static_cast<long>(neurons.size())) {
        throw IoError("model file: neuron index out of range");
      }
      r.expect("theta");
      neurons[current].theta = r.real();
    } else if (w == "channel") {
      if (current < 0) throw IoError("model file: channel before any neuron");
      const long ch = r.integer();
      const long count = r.integer();
      if (ch < 0 || ch >= 2 * m || count < 0) throw IoError("model file: bad channel line");
      auto& weight = neurons[current].incoming[ch];
      for (long b = 0; b < count; ++b) {
        const double center = r.real();
        const double amplitude = r.real();
        weight.add_bump(center, amplitude);
      }
    } else {
      throw IoError("model file: unexpected '" + w + "'");
    }
  }
  return net;
}

}  // namespace pdp
