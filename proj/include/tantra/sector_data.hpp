#pragma once

#include <filesystem>

#include "tantra/csv.hpp"
#include "tantra/normative.hpp"
#include "tantra/relators.hpp"

namespace tantra {

// Closed set of support-nature categories; every scheme maps to >= 1.
inline constexpr std::array<const char*, 12> kSupportCategories = {
    "Input",      "Price", "Income",     "Loan",
    "Risk",       "Distress", "Investment", "Cash",
    "Tax-relief", "Employment-guarantee", "PDS", "Market-intervention"};

bool is_support_category(std::string_view name);

struct YearTotals {
  std::string fiscal_year;
  Decimal computed;
  std::optional<Decimal> declared;
  std::optional<Decimal> delta;  // declared - computed, exact
};

struct ConsistencyReport {
  std::vector<YearTotals> years;        // fiscal-year order
  std::vector<std::string> anomalies;   // deterministic order, empty = consistent
};

struct IngestResult {
  int rows = 0;  // data rows committed (total rows excluded)
  ConsistencyReport report;
};

enum class GroupBy { Scheme, Category };

struct SummaryRow {
  std::string key;  // scheme_id or category name
  std::string name;
  Decimal amount;
  Decimal share_pct;  // of the computed year total, scale 2
};

struct FixtureReport {
  int elements = 0;
  int reifications = 0;
  int relators = 0;
  int relationships = 0;
  int categories = 0;
  int goals = 0;
  int interventions = 0;
};

// Sector fixtures, allocation ingestion and allocation analytics.
// Allocation rows are What-aspect Instantiated elements labelled
// "SchemeAllocation" with unique_id "<scheme_id>:<fiscal_year>"; declared
// totals are "DeclaredTotal" nodes; category definitions and scheme
// mappings are "SupportCategory" / "SchemeCategoryMap" nodes.
class SectorData {
 public:
  SectorData(GraphStore& store, TantraModel& model, RelatorModel& relators,
             NormativeModel& normative)
      : store_(store), model_(model), relators_(relators), normative_(normative) {}

  // Header must be exactly {scheme_id,name,support_nature,fiscal_year,
  // amount_inr_crore} in any order. Rows with scheme_id "TOTAL" declare a
  // year total. Validates the whole file before committing anything.
  // Throws SchemaMismatch (named column/line), DuplicateKey (every
  // duplicate listed), NegativeAmount (named line).
  IngestResult ingest_allocations(const csv::Table& table);

  // Computed (exact decimal sum) vs declared totals per fiscal year, plus
  // anomaly lines for nonzero deltas and unmapped schemes.
  ConsistencyReport consistency_report() const;

  // Descending by amount, ties by name ascending; share of the computed
  // year total at scale 2. Throws UnknownYear.
  std::vector<SummaryRow> allocation_summary(const std::string& fiscal_year,
                                             GroupBy group_by) const;

  // Loads participants.json, aspects_map.json, reforms.json and
  // toc_price_deficiency.json from data_dir. Every node it creates carries
  // a fixture_key attribute; a store already holding any fixture_key
  // raises ConflictingFixture.
  FixtureReport load_fixture(const std::filesystem::path& data_dir);

  // Who-aspect elements reachable from the scheme's allocation rows over
  // relator-founded relationships; id-ordered, empty = unlinked scheme.
  // Throws UnknownScheme.
  std::vector<std::string> scheme_reach(const std::string& scheme_id) const;

 private:
  GraphStore& store_;
  TantraModel& model_;
  RelatorModel& relators_;
  NormativeModel& normative_;
};

}  // namespace tantra
