#include "gmp/output.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace gmp {

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw ConfigError("write failed for '" + path + "'");
}

std::string faces_path(const std::string& snapshot_path) {
  const auto dot = snapshot_path.rfind(".csv");
  if (dot == std::string::npos || dot + 4 != snapshot_path.size()) return snapshot_path + "_faces.csv";
  return snapshot_path.substr(0, dot) + "_faces.csv";
}

void write_snapshot(const std::string& path, const StaggeredGrid& g, const MixtureState* state,
                    const VelocityPressure* vp) {
  std::string cells = "i,j,x,y,rho,nu,p\n";
  std::string faces = "component,i,j,x,y,value\n";
  auto num = [](double x) { return format_number(x); };
  if (state) {
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        const int c = g.cell(i, j);
        const Vec2 x = g.cell_center(i, j);
        const double p = vp && !vp->p.empty() ? vp->p[c] : 0.0;
        cells += std::to_string(i) + "," + std::to_string(j) + "," + num(x.x) + "," + num(x.y) + "," +
                 num(state->rho[c]) + "," + num(state->nu[c]) + "," + num(p) + "\n";
      }
  }
  if (vp && !vp->velocity.faces.u.empty()) {
    const auto& f = vp->velocity.faces;
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i <= g.nx(); ++i) {
        const Vec2 x = g.xface_center(i, j);
        faces += "u," + std::to_string(i) + "," + std::to_string(j) + "," + num(x.x) + "," + num(x.y) + "," +
                 num(f.u[g.xface(i, j)]) + "\n";
      }
    for (int j = 0; j <= g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        const Vec2 x = g.yface_center(i, j);
        faces += "v," + std::to_string(i) + "," + std::to_string(j) + "," + num(x.x) + "," + num(x.y) + "," +
                 num(f.v[g.yface(i, j)]) + "\n";
      }
  }
  write_text(path, cells);
  write_text(faces_path(path), faces);
}

void write_traces(const std::string& path, const TraceRecord& record) {
  std::string s = "time,face,value,weight\n";
  for (const auto& st : record.steps)
    for (const auto& e : st.entries)
      s += format_number(st.time) + "," + std::to_string(e.face) + "," + format_number(e.value) + "," +
           format_number(e.weight) + "\n";
  write_text(path, s);
}

std::vector<double> SnapshotTable::column(const std::string& name) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    if (name == "rho")
      out.push_back(r.rho);
    else if (name == "nu")
      out.push_back(r.nu);
    else if (name == "p")
      out.push_back(r.p);
    else
      throw ConfigError("unknown snapshot field '" + name + "' (expected rho, nu or p)");
  }
  return out;
}

SnapshotTable read_snapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open snapshot '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != "i,j,x,y,rho,nu,p")
    throw ConfigError("'" + path + "' is not a snapshot cell table");
  SnapshotTable t;
  int ln = 1;
  while (std::getline(in, line)) {
    ++ln;
    if (line.empty()) continue;
    SnapshotRow r;
    std::istringstream ss(line);
    std::string tok[7];
    for (auto& k : tok)
      if (!std::getline(ss, k, ',')) throw ConfigError(path + ":" + std::to_string(ln) + ": expected 7 columns");
    try {
      r.i = std::stoi(tok[0]);
      r.j = std::stoi(tok[1]);
      r.x = std::strtod(tok[2].c_str(), nullptr);
      r.y = std::strtod(tok[3].c_str(), nullptr);
      r.rho = std::strtod(tok[4].c_str(), nullptr);
      r.nu = std::strtod(tok[5].c_str(), nullptr);
      r.p = std::strtod(tok[6].c_str(), nullptr);
    } catch (const std::exception&) {
      throw ConfigError(path + ":" + std::to_string(ln) + ": malformed row");
    }
    t.nx = std::max(t.nx, r.i + 1);
    t.ny = std::max(t.ny, r.j + 1);
    t.rows.push_back(r);
  }
  return t;
}

Report::Report(std::string title) { body_ = std::string(kReportVersion) + "\n" + "title: " + title + "\n"; }

void Report::section(const std::string& name) { body_ += "\n[" + name + "]\n"; }

void Report::value(const std::string& key, const std::string& v) { body_ += key + ": " + v + "\n"; }
void Report::value(const std::string& key, double v) { value(key, format_number(v)); }
void Report::value(const std::string& key, long long v) { value(key, std::to_string(v)); }

void Report::table(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  for (std::size_t k = 0; k < header.size(); ++k) body_ += (k ? "," : "") + header[k];
  body_ += "\n";
  for (const auto& r : rows) {
    for (std::size_t k = 0; k < r.size(); ++k) body_ += (k ? "," : "") + format_number(r[k]);
    body_ += "\n";
  }
}

void Report::check(const std::string& name, bool ok, const std::string& detail) {
  if (!ok) ++failures_;
  body_ += std::string("check ") + name + ": " + (ok ? "ok" : "VIOLATED") + (detail.empty() ? "" : " (" + detail + ")") +
           "\n";
}

std::string Report::str() const { return body_ + "\n" + (passed() ? "PASS" : "FAIL") + "\n"; }

void Report::write(const std::string& path) const { write_text(path, str()); }

}  // namespace gmp
