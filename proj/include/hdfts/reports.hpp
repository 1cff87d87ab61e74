#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hdfts/annuity.hpp"
#include "hdfts/backtest.hpp"
#include "hdfts/pipeline.hpp"

namespace hdfts {

// CSV writers. All numeric values use the shortest round-trip format so
// identical runs produce byte-identical files.

// section,point,value
void write_means_csv(std::ostream& out, const Eigen::MatrixXd& means,
                     const std::vector<std::string>& section_ids, const Grid& grid);

// section,component,point,value (components are 1-based)
void write_back_loadings_csv(std::ostream& out, const BackLoadingSet& loadings,
                             const std::vector<std::string>& section_ids);

// component,point,value
void write_front_loadings_csv(std::ostream& out, const FrontLoadings& front);

// t,p,q,value (t = period id; p, q 1-based)
void write_factors_csv(std::ostream& out, const std::vector<Eigen::MatrixXd>& factors,
                       const std::vector<std::int64_t>& period_ids);

// section,origin,horizon,point,value,lower,upper; origin is the last
// training period. Point-only bundles leave lower/upper empty.
void write_forecast_csv(std::ostream& out, const ForecastBundle& bundle);

// horizon,count,mean_rmsfe,pooled_rmsfe[,mean_interval_score]
void write_eval_csv(std::ostream& out, const EvalReport& report);

// section,horizon,rmsfe[,interval_score]
void write_eval_by_section_csv(std::ostream& out, const EvalReport& report);

// metric,horizon,value summary rows of a Monte Carlo study
void write_study_csv(std::ostream& out, const StudyReport& report);

// rep,rmse,k,r[,rmsfe_h...] raw per-replication records
void write_study_reps_csv(std::ostream& out, const StudyReport& report);

// section,age,period,pv_true,pv_forecast,error; cross-section averages
// appended with section = "mean"
void write_pricing_csv(std::ostream& out, const PricingReport& report);

// Aligned-column text renderings for the terminal.
std::string format_eval_text(const EvalReport& report);
std::string format_study_text(const StudyReport& report);
std::string format_fit_summary(const FittedModel& model, const std::vector<std::string>& section_ids);

}  // namespace hdfts
