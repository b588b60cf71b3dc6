//! Shared domain vocabulary: impact objects and their degrees, the weight
//! scheme that turns a degree into a scalar, holder categories and
//! stablecoin profiles.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Exposure {
    E1,
    E2,
    E3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Nature {
    I1,
    I2,
    I3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LossForm {
    L1,
    L2,
    L3,
}

/// Severity triple of an impact object: exposure index, impact nature and
/// loss form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ImpactDegree {
    pub exposure: Exposure,
    pub nature: Nature,
    pub loss: LossForm,
}

impl ImpactDegree {
    pub const fn new(exposure: Exposure, nature: Nature, loss: LossForm) -> Self {
        Self {
            exposure,
            nature,
            loss,
        }
    }

    pub fn levels(&self) -> [FacetLevel; 3] {
        [
            match self.exposure {
                Exposure::E1 => FacetLevel::E1,
                Exposure::E2 => FacetLevel::E2,
                Exposure::E3 => FacetLevel::E3,
            },
            match self.nature {
                Nature::I1 => FacetLevel::I1,
                Nature::I2 => FacetLevel::I2,
                Nature::I3 => FacetLevel::I3,
            },
            match self.loss {
                LossForm::L1 => FacetLevel::L1,
                LossForm::L2 => FacetLevel::L2,
                LossForm::L3 => FacetLevel::L3,
            },
        ]
    }

    /// All 27 possible degrees.
    pub fn all() -> Vec<ImpactDegree> {
        let mut out = Vec::with_capacity(27);
        for e in [Exposure::E1, Exposure::E2, Exposure::E3] {
            for i in [Nature::I1, Nature::I2, Nature::I3] {
                for l in [LossForm::L1, LossForm::L2, LossForm::L3] {
                    out.push(ImpactDegree::new(e, i, l));
                }
            }
        }
        out
    }
}

impl fmt::Display for ImpactDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [e, i, l] = self.levels();
        write!(f, "({e},{i},{l})")
    }
}

/// One of the nine facet levels a [`WeightScheme`] assigns a score to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FacetLevel {
    E1,
    E2,
    E3,
    I1,
    I2,
    I3,
    L1,
    L2,
    L3,
}

impl FacetLevel {
    pub const ALL: [FacetLevel; 9] = [
        FacetLevel::E1,
        FacetLevel::E2,
        FacetLevel::E3,
        FacetLevel::I1,
        FacetLevel::I2,
        FacetLevel::I3,
        FacetLevel::L1,
        FacetLevel::L2,
        FacetLevel::L3,
    ];

    pub fn facet_name(&self) -> &'static str {
        match self {
            FacetLevel::E1 | FacetLevel::E2 | FacetLevel::E3 => "exposure",
            FacetLevel::I1 | FacetLevel::I2 | FacetLevel::I3 => "nature",
            FacetLevel::L1 | FacetLevel::L2 | FacetLevel::L3 => "loss",
        }
    }
}

impl fmt::Display for FacetLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImpactCategory {
    PriceFluctuation,
    SmartContractIssue,
    PeripheralFactor,
}

impl ImpactCategory {
    pub const ALL: [ImpactCategory; 3] = [
        ImpactCategory::PriceFluctuation,
        ImpactCategory::SmartContractIssue,
        ImpactCategory::PeripheralFactor,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            ImpactCategory::PriceFluctuation => "Price fluctuation",
            ImpactCategory::SmartContractIssue => "Smart contract issue",
            ImpactCategory::PeripheralFactor => "Peripheral factor",
        }
    }
}

/// The eight upstream impact objects, in canonical table order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImpactObjectName {
    MarketVolatility,
    PriceManipulation,
    CodeVulnerability,
    FlashLoan,
    GovernanceAttack,
    RugPull,
    AccessControl,
    ImpactedFund,
}

impl ImpactObjectName {
    pub const ALL: [ImpactObjectName; 8] = [
        ImpactObjectName::MarketVolatility,
        ImpactObjectName::PriceManipulation,
        ImpactObjectName::CodeVulnerability,
        ImpactObjectName::FlashLoan,
        ImpactObjectName::GovernanceAttack,
        ImpactObjectName::RugPull,
        ImpactObjectName::AccessControl,
        ImpactObjectName::ImpactedFund,
    ];

    pub fn category(&self) -> ImpactCategory {
        use ImpactObjectName::*;
        match self {
            MarketVolatility | PriceManipulation => ImpactCategory::PriceFluctuation,
            CodeVulnerability | FlashLoan | GovernanceAttack => ImpactCategory::SmartContractIssue,
            RugPull | AccessControl | ImpactedFund => ImpactCategory::PeripheralFactor,
        }
    }

    pub fn default_degree(&self) -> ImpactDegree {
        use Exposure::*;
        use ImpactObjectName::*;
        use LossForm::*;
        use Nature::*;
        match self {
            MarketVolatility => ImpactDegree::new(E1, I3, L2),
            PriceManipulation => ImpactDegree::new(E2, I3, L2),
            CodeVulnerability | FlashLoan | GovernanceAttack => ImpactDegree::new(E2, I1, L3),
            RugPull | AccessControl => ImpactDegree::new(E3, I1, L3),
            ImpactedFund => ImpactDegree::new(E2, I1, L1),
        }
    }

    /// Snake-case identifier used in every file format.
    pub fn as_str(&self) -> &'static str {
        use ImpactObjectName::*;
        match self {
            MarketVolatility => "market_volatility",
            PriceManipulation => "price_manipulation",
            CodeVulnerability => "code_vulnerability",
            FlashLoan => "flash_loan",
            GovernanceAttack => "governance_attack",
            RugPull => "rug_pull",
            AccessControl => "access_control",
            ImpactedFund => "impacted_fund",
        }
    }

    pub fn label(&self) -> &'static str {
        use ImpactObjectName::*;
        match self {
            MarketVolatility => "Market volatility",
            PriceManipulation => "Price manipulation",
            CodeVulnerability => "Code vulnerability",
            FlashLoan => "Flash loan attack",
            GovernanceAttack => "Governance attack",
            RugPull => "Rug pull",
            AccessControl => "Access control",
            ImpactedFund => "Impacted fund",
        }
    }
}

impl fmt::Display for ImpactObjectName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ImpactObjectName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ImpactObjectName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::Lookup {
                kind: "impact object",
                key: s.to_string(),
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ImpactObject {
    pub name: ImpactObjectName,
    pub category: ImpactCategory,
    pub degree: ImpactDegree,
}

/// The eight impact objects with their default degrees, in table order.
pub fn default_impact_objects() -> Vec<ImpactObject> {
    ImpactObjectName::ALL
        .iter()
        .map(|&name| ImpactObject {
            name,
            category: name.category(),
            degree: name.default_degree(),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CombineRule {
    #[default]
    Mean,
    Sum,
    Product,
}

/// Maps an [`ImpactDegree`] to the scalar weight used in the upstream sum.
///
/// Defaults score every facet level by its index (E1=1, E2=2, E3=3 and the
/// same for nature and loss), combine by mean and scale by 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightScheme {
    pub levels: BTreeMap<FacetLevel, f64>,
    #[serde(default)]
    pub combine: CombineRule,
    #[serde(default = "default_scale")]
    pub scale: f64,
    #[serde(default = "default_true")]
    pub monotone: bool,
}

fn default_scale() -> f64 {
    1.0
}

fn default_true() -> bool {
    true
}

impl Default for WeightScheme {
    fn default() -> Self {
        let levels = FacetLevel::ALL
            .iter()
            .enumerate()
            .map(|(idx, &lvl)| (lvl, (idx % 3 + 1) as f64))
            .collect();
        Self {
            levels,
            combine: CombineRule::Mean,
            scale: 1.0,
            monotone: true,
        }
    }
}

impl WeightScheme {
    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    fn score(&self, level: FacetLevel) -> Result<f64> {
        self.levels.get(&level).copied().ok_or_else(|| {
            Error::Config(format!(
                "weight scheme has no score for {} level {}",
                level.facet_name(),
                level
            ))
        })
    }

    /// Checks every invariant: all nine levels present, finite and
    /// nonnegative, monotone within each facet (unless disabled), positive
    /// scale, and a positive weight for each of the 27 degrees.
    pub fn validate(&self) -> Result<()> {
        for lvl in FacetLevel::ALL {
            let s = self.score(lvl)?;
            if !s.is_finite() || s < 0.0 {
                return Err(Error::Config(format!(
                    "score for {lvl} must be finite and nonnegative, got {s}"
                )));
            }
        }
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(Error::Config(format!(
                "scale must be positive, got {}",
                self.scale
            )));
        }
        if self.monotone {
            for facet in FacetLevel::ALL.chunks(3) {
                let s: Vec<f64> = facet.iter().map(|l| self.levels[l]).collect();
                if s[0] > s[1] || s[1] > s[2] {
                    return Err(Error::Config(format!(
                        "{} scores must be nondecreasing by level (set monotone = false to override)",
                        facet[0].facet_name()
                    )));
                }
            }
        }
        for degree in ImpactDegree::all() {
            if weight_of(&degree, self)? <= 0.0 {
                return Err(Error::Config(format!(
                    "degree {degree} has a nonpositive weight"
                )));
            }
        }
        Ok(())
    }
}

/// Scalar weight of a degree: the combine rule applied to its three facet
/// scores, times the scheme's scale.
pub fn weight_of(degree: &ImpactDegree, scheme: &WeightScheme) -> Result<f64> {
    let [a, b, c] = degree.levels();
    let (a, b, c) = (scheme.score(a)?, scheme.score(b)?, scheme.score(c)?);
    let combined = match scheme.combine {
        CombineRule::Mean => (a + b + c) / 3.0,
        CombineRule::Sum => a + b + c,
        CombineRule::Product => a * b * c,
    };
    Ok(combined * scheme.scale)
}

/// Holder categories of a downstream snapshot. `Unlabeled` holds mass the
/// snapshot could not attribute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum HolderCategory {
    Exchange,
    AssetManagement,
    DefiProtocol,
    BlockchainInfrastructure,
    WhaleRetail,
    Unlabeled,
}

impl HolderCategory {
    pub const ALL: [HolderCategory; 6] = [
        HolderCategory::Exchange,
        HolderCategory::AssetManagement,
        HolderCategory::DefiProtocol,
        HolderCategory::BlockchainInfrastructure,
        HolderCategory::WhaleRetail,
        HolderCategory::Unlabeled,
    ];

    pub const LABELED: [HolderCategory; 5] = [
        HolderCategory::Exchange,
        HolderCategory::AssetManagement,
        HolderCategory::DefiProtocol,
        HolderCategory::BlockchainInfrastructure,
        HolderCategory::WhaleRetail,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            HolderCategory::Exchange => "Exchange",
            HolderCategory::AssetManagement => "AssetManagement",
            HolderCategory::DefiProtocol => "DefiProtocol",
            HolderCategory::BlockchainInfrastructure => "BlockchainInfrastructure",
            HolderCategory::WhaleRetail => "WhaleRetail",
            HolderCategory::Unlabeled => "Unlabeled",
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            HolderCategory::Exchange => "Exchange",
            HolderCategory::AssetManagement => "Asset management",
            HolderCategory::DefiProtocol => "DeFi protocol",
            HolderCategory::BlockchainInfrastructure => "Blockchain infrastructure",
            HolderCategory::WhaleRetail => "Whale/retail",
            HolderCategory::Unlabeled => "Unlabeled",
        }
    }
}

impl fmt::Display for HolderCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for HolderCategory {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        HolderCategory::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| {
                let valid: Vec<&str> = HolderCategory::ALL.iter().map(|c| c.as_str()).collect();
                Error::Input(format!(
                    "unknown holder category '{s}' (valid: {})",
                    valid.join(", ")
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CollateralClass {
    Fiat,
    Rwa,
    Crypto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mechanism {
    Liquidation,
    SupplyAdjustment,
    Hedging,
    Emergency,
    Implicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum YieldSource {
    NativeProtocolRevenue,
    CashEquivalents,
    L1Staking,
    Derivatives,
    ExternalDefi,
    ThirdPartyCustodian,
    CommunitySubsidized,
    SecondaryTokenEmission,
}

/// Static descriptor of one stablecoin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StablecoinProfile {
    pub symbol: String,
    pub project: String,
    pub peg_currency: String,
    pub collateral_classes: BTreeSet<CollateralClass>,
    pub mechanisms: BTreeSet<Mechanism>,
    /// Annual yield as a fraction; 0 when the coin pays none, `None` when a
    /// yield exists but its rate is undisclosed.
    pub yield_rate: Option<f64>,
    pub yield_sources: BTreeSet<YieldSource>,
    /// False when the issuer pays yield without naming its source.
    pub yield_sources_disclosed: bool,
    pub market_cap: f64,
}

impl StablecoinProfile {
    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::Input(format!("{}: {m}", self.symbol)));
        if self.symbol.is_empty() {
            return Err(Error::Input("profile with empty symbol".into()));
        }
        if self.collateral_classes.is_empty() {
            return fail("collateral_classes must be nonempty");
        }
        if self.mechanisms.is_empty() {
            return fail("mechanisms must be nonempty");
        }
        if let Some(r) = self.yield_rate {
            if !(r.is_finite() && r >= 0.0) {
                return fail("yield_rate must be >= 0");
            }
        }
        if !(self.market_cap.is_finite() && self.market_cap > 0.0) {
            return fail("market_cap must be > 0");
        }
        let pays_yield = self.yield_rate.is_none_or(|r| r > 0.0);
        if pays_yield && self.yield_sources_disclosed && self.yield_sources.is_empty() {
            return fail("a yield-bearing coin needs at least one yield source");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scheme(scores: [f64; 3], combine: CombineRule, scale: f64) -> WeightScheme {
        let mut s = WeightScheme {
            combine,
            scale,
            ..WeightScheme::default()
        };
        for (lvl, v) in [FacetLevel::E1, FacetLevel::I1, FacetLevel::L1]
            .into_iter()
            .zip(scores)
        {
            s.levels.insert(lvl, v);
        }
        s
    }

    const D111: ImpactDegree = ImpactDegree::new(Exposure::E1, Nature::I1, LossForm::L1);

    #[test]
    fn default_objects_follow_table_order_and_degrees() {
        let objs = default_impact_objects();
        assert_eq!(objs.len(), 8);
        assert_eq!(objs[0].name, ImpactObjectName::MarketVolatility);
        assert_eq!(objs[0].degree.to_string(), "(E1,I3,L2)");
        assert_eq!(objs[5].name, ImpactObjectName::RugPull);
        assert_eq!(objs[5].degree.to_string(), "(E3,I1,L3)");
        assert_eq!(objs[7].name, ImpactObjectName::ImpactedFund);
        assert_eq!(objs[7].degree.to_string(), "(E2,I1,L1)");
        let count = |c| objs.iter().filter(|o| o.category == c).count();
        assert_eq!(count(ImpactCategory::PriceFluctuation), 2);
        assert_eq!(count(ImpactCategory::SmartContractIssue), 3);
        assert_eq!(count(ImpactCategory::PeripheralFactor), 3);
        assert_eq!(objs, default_impact_objects());
    }

    #[test]
    fn weight_of_examples() {
        assert_eq!(
            weight_of(&D111, &scheme([0.0; 3], CombineRule::Mean, 1.0)).unwrap(),
            0.0
        );
        let w = weight_of(&D111, &scheme([1.0, 2.0, 3.0], CombineRule::Mean, 1.0)).unwrap();
        assert!((w - 2.0).abs() < 1e-15);
        let w = weight_of(&D111, &scheme([1.0, 2.0, 3.0], CombineRule::Sum, 0.5)).unwrap();
        assert!((w - 3.0).abs() < 1e-15);
        let w = weight_of(&D111, &scheme([1.0, 2.0, 3.0], CombineRule::Product, 1.0)).unwrap();
        assert!((w - 6.0).abs() < 1e-15);
    }

    #[test]
    fn missing_facet_is_named() {
        let mut s = WeightScheme::default();
        s.levels.remove(&FacetLevel::I1);
        let err = weight_of(&D111, &s).unwrap_err().to_string();
        assert!(err.contains("nature") && err.contains("I1"), "{err}");
        assert!(s.validate().is_err());
    }

    #[test]
    fn default_scheme_is_valid_and_bounded() {
        let s = WeightScheme::default();
        s.validate().unwrap();
        for d in ImpactDegree::all() {
            let w = weight_of(&d, &s).unwrap();
            assert!((1.0..=3.0).contains(&w));
        }
    }

    #[test]
    fn non_monotone_rejected_unless_allowed() {
        let mut s = WeightScheme::default();
        s.levels.insert(FacetLevel::L1, 5.0);
        assert!(s.validate().is_err());
        s.monotone = false;
        s.validate().unwrap();
    }

    #[test]
    fn zero_product_weight_is_invalid() {
        let mut s = WeightScheme::default();
        s.combine = CombineRule::Product;
        s.levels.insert(FacetLevel::E1, 0.0);
        assert!(s.validate().is_err());
    }

    #[test]
    fn category_names_round_trip() {
        for c in HolderCategory::ALL {
            assert_eq!(c.as_str().parse::<HolderCategory>().unwrap(), c);
        }
        let err = "Bank".parse::<HolderCategory>().unwrap_err().to_string();
        assert!(err.contains("WhaleRetail"));
    }

    #[test]
    fn profile_invariants() {
        let mut p = StablecoinProfile {
            symbol: "X".into(),
            project: "X".into(),
            peg_currency: "USD".into(),
            collateral_classes: [CollateralClass::Fiat].into(),
            mechanisms: [Mechanism::Implicit].into(),
            yield_rate: Some(0.0),
            yield_sources: BTreeSet::new(),
            yield_sources_disclosed: true,
            market_cap: 1.0,
        };
        p.validate().unwrap();
        p.yield_rate = Some(0.05);
        assert!(p.validate().is_err());
        p.yield_sources.insert(YieldSource::CashEquivalents);
        p.validate().unwrap();
        p.mechanisms.clear();
        assert!(p.validate().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_scores() -> impl Strategy<Value = [f64; 9]> {
            proptest::array::uniform9(0.01f64..10.0)
        }

        fn build(scores: [f64; 9], combine: CombineRule, scale: f64) -> WeightScheme {
            WeightScheme {
                levels: FacetLevel::ALL.into_iter().zip(scores).collect(),
                combine,
                scale,
                monotone: false,
            }
        }

        fn arb_rule() -> impl Strategy<Value = CombineRule> {
            prop_oneof![
                Just(CombineRule::Mean),
                Just(CombineRule::Sum),
                Just(CombineRule::Product)
            ]
        }

        proptest! {
            #[test]
            fn raising_a_score_never_lowers_weight(
                scores in arb_scores(),
                rule in arb_rule(),
                which in 0usize..9,
                bump in 0.0f64..5.0,
                d in 0usize..27,
            ) {
                let degree = ImpactDegree::all()[d];
                let base = weight_of(&degree, &build(scores, rule, 1.0)).unwrap();
                let mut raised = scores;
                raised[which] += bump;
                let after = weight_of(&degree, &build(raised, rule, 1.0)).unwrap();
                prop_assert!(after >= base - 1e-12 * base.abs());
            }

            #[test]
            fn scale_is_a_pure_multiplier(
                scores in arb_scores(),
                rule in arb_rule(),
                scale in 0.01f64..100.0,
                d in 0usize..27,
            ) {
                let degree = ImpactDegree::all()[d];
                let unit = weight_of(&degree, &build(scores, rule, 1.0)).unwrap();
                let scaled = weight_of(&degree, &build(scores, rule, scale)).unwrap();
                prop_assert!((scaled - scale * unit).abs() <= 1e-12 * scaled.abs().max(1.0));
            }
        }
    }
}
