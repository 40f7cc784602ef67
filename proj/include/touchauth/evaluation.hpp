#pragma once

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "touchauth/ingest.hpp"
#include "touchauth/model.hpp"

namespace touchauth {

// Positive class is "authentic user accepted" (label 0), so fp counts
// imposters accepted and fn counts authentic users rejected.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
};

inline ConfusionMatrix confusion(const std::vector<int>& predictions,
                                 const std::vector<int>& truth) {
  if (predictions.size() != truth.size() || predictions.empty())
    throw DataError("confusion: prediction/truth length mismatch or empty");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const int p = predictions[i], t = truth[i];
    if ((p != 0 && p != 1) || (t != 0 && t != 1)) throw DataError("confusion: labels must be 0 or 1");
    if (t == 0)
      p == 0 ? ++cm.tp : ++cm.fn;
    else
      p == 0 ? ++cm.fp : ++cm.tn;
  }
  return cm;
}

struct Metrics {
  double accuracy = 0;
  double f1 = 0;
  double fnr = 0;
  double fpr = 0;
  bool degenerate = false;  // some ratio had a zero denominator and was set to 0
};

inline Metrics metrics(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw DataError("metrics: empty confusion matrix");
  Metrics m;
  auto ratio = [&m](double num, double den) {
    if (den == 0) {
      m.degenerate = true;
      return 0.0;
    }
    return num / den;
  };
  const auto tp = static_cast<double>(cm.tp), fp = static_cast<double>(cm.fp),
             tn = static_cast<double>(cm.tn), fn = static_cast<double>(cm.fn);
  m.accuracy = (tp + tn) / (tp + fp + tn + fn);
  m.fpr = ratio(fp, fp + tn);
  m.fnr = ratio(fn, fn + tp);
  const double precision = ratio(tp, tp + fp);
  const double recall = ratio(tp, tp + fn);
  m.f1 = ratio(2.0 * precision * recall, precision + recall);
  return m;
}

// One line of the per-user report; percentages in [0, 100].
struct ReportRow {
  std::string user;
  std::string game;   // display name, e.g. "Pubg"
  std::string model;  // "NN", "XGB", "SVC"
  double accuracy = 0;
  double f1 = 0;
  double fnr = 0;
  double fpr = 0;
};

inline ReportRow make_report_row(const std::string& user, Game game, ModelVariant model,
                                 const Metrics& m) {
  return ReportRow{user, game_name(game), variant_report_name(model), 100.0 * m.accuracy,
                   100.0 * m.f1,          100.0 * m.fnr,              100.0 * m.fpr};
}

enum class GroupBy { Model, Game, ModelAndGame };

struct ReportGroup {
  std::string key;  // "<game>/<model>", "<game>" or "<model>"
  ReportRow mean;   // user field empty
  ReportRow stddev;
  std::size_t count = 0;
};

// Mean and population standard deviation per metric, groups ordered by key.
inline std::vector<ReportGroup> aggregate_report(const std::vector<ReportRow>& rows,
                                                 GroupBy group_by) {
  std::map<std::string, std::vector<const ReportRow*>> groups;
  for (const auto& r : rows) {
    std::string key;
    switch (group_by) {
      case GroupBy::Model: key = r.model; break;
      case GroupBy::Game: key = r.game; break;
      case GroupBy::ModelAndGame: key = r.game + "/" + r.model; break;
    }
    groups[key].push_back(&r);
  }
  std::vector<ReportGroup> out;
  for (const auto& [key, members] : groups) {
    ReportGroup g;
    g.key = key;
    g.count = members.size();
    g.mean.game = group_by != GroupBy::Model ? members[0]->game : std::string{};
    g.mean.model = group_by != GroupBy::Game ? members[0]->model : std::string{};
    g.stddev.game = g.mean.game;
    g.stddev.model = g.mean.model;
    const double n = static_cast<double>(members.size());
    auto column = [&](double ReportRow::*field, double& mean_out, double& std_out) {
      double sum = 0;
      for (const auto* r : members) sum += r->*field;
      const double mean = sum / n;
      double ss = 0;
      for (const auto* r : members) {
        const double d = r->*field - mean;
        ss += d * d;
      }
      mean_out = mean;
      std_out = std::sqrt(ss / n);
    };
    column(&ReportRow::accuracy, g.mean.accuracy, g.stddev.accuracy);
    column(&ReportRow::f1, g.mean.f1, g.stddev.f1);
    column(&ReportRow::fnr, g.mean.fnr, g.stddev.fnr);
    column(&ReportRow::fpr, g.mean.fpr, g.stddev.fpr);
    out.push_back(std::move(g));
  }
  return out;
}

inline std::string format_percent(double v) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(4) << v;
  return ss.str();
}

// Per-user rows followed by Avg/Std rows per (game, model) group.
inline void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << "User,Game,Model,Accuracy,F1 Score,FNR,FPR\n";
  auto emit = [&out](const std::string& user, const ReportRow& r) {
    out << user << ',' << r.game << ',' << r.model << ',' << format_percent(r.accuracy) << ','
        << format_percent(r.f1) << ',' << format_percent(r.fnr) << ',' << format_percent(r.fpr)
        << '\n';
  };
  for (const auto& r : rows) emit(r.user, r);
  const auto groups = aggregate_report(rows, GroupBy::ModelAndGame);
  for (const auto& g : groups) emit("Avg", g.mean);
  for (const auto& g : groups) emit("Std", g.stddev);
}

}  // namespace touchauth
