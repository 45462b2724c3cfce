//! Seeded synthetic data.
//!
//! The generators here stand in for real exports in tests, benchmarks and
//! demos. None of the values describe real regions.

use rand::Rng as _;

use crate::features::{IndicatorMap, PREDICTOR_COUNT};
use crate::ingest::IndicatorTable;
use crate::kmeans::Point;
use crate::matrix::Matrix;
use crate::rng;

#[derive(Debug, Clone, PartialEq)]
pub struct RegionTableConfig {
    pub regions: usize,
    pub seed: u64,
    /// Year in which HDI, GDP and all four population predictors are present.
    pub census_year: i32,
    /// Later year carrying only HDI and GDP.
    pub later_year: i32,
    pub indicators: IndicatorMap,
}

impl Default for RegionTableConfig {
    fn default() -> Self {
        Self {
            regions: 300,
            seed: 2012,
            census_year: 2010,
            later_year: 2012,
            indicators: IndicatorMap::default(),
        }
    }
}

fn round_to(v: f64, decimals: i32) -> f64 {
    let f = 10f64.powi(decimals);
    (v * f).round() / f
}

/// A wide indicator table over synthetic regions.
///
/// HDI and GDP are present in both years; poverty, internet users, labor
/// force and population only in the census year. Two unrelated indicators
/// with scattered blanks are mixed in. All six model indicators follow one
/// latent development score per region, so HDI bands are learnable from the
/// predictors.
pub fn region_table(config: &RegionTableConfig) -> IndicatorTable {
    let mut rng = rng::seeded(config.seed);
    let names = &config.indicators;
    let (y0, y1) = (config.census_year, config.later_year);
    let mut b = IndicatorTable::builder();
    let mut put = |region: &str, indicator: &str, year: i32, value: Option<f64>| {
        b.insert(region, indicator, year, value)
            .expect("generated keys are unique and finite");
    };

    for i in 0..config.regions {
        let region = format!("Region {:03}, Kab", i + 1);
        let dev: f64 = rng.gen();
        let population = (rng.gen_range(11.5f64..15.0)).exp();
        let jitter = |rng: &mut rng::Rng, spread: f64| 1.0 + rng.gen_range(-spread..spread);

        let hdi = (50.0 + 38.0 * dev + rng.gen_range(-1.0..1.0)).clamp(40.0, 95.0);
        let gdp = (4.0 + 90.0 * dev * dev) * jitter(&mut rng, 0.15);
        let poverty = population * (0.28 - 0.24 * dev) * jitter(&mut rng, 0.05);
        let internet = population * (0.04 + 0.5 * dev) * jitter(&mut rng, 0.05);
        let labor = population * (0.38 + 0.12 * dev) * jitter(&mut rng, 0.03);

        put(&region, &names.hdi, y0, Some(round_to(hdi, 2)));
        put(&region, &names.gdp, y0, Some(round_to(gdp, 3)));
        put(&region, &names.npp, y0, Some(poverty.round()));
        put(&region, &names.niu, y0, Some(internet.round()));
        put(&region, &names.nl, y0, Some(labor.round()));
        put(&region, &names.np, y0, Some(population.round()));

        let hdi_later = (hdi + rng.gen_range(0.3..1.5)).min(95.0);
        let gdp_later = gdp * rng.gen_range(1.04..1.12);
        put(&region, &names.hdi, y1, Some(round_to(hdi_later, 2)));
        put(&region, &names.gdp, y1, Some(round_to(gdp_later, 3)));
        for name in [&names.npp, &names.niu, &names.nl, &names.np] {
            put(&region, name, y1, None);
        }

        for year in [y0, y1] {
            let doctors = (rng.gen_bool(0.6)).then(|| (population / 2000.0 * (0.5 + dev)).round());
            put(&region, "Number of Doctors", year, doctors);
            let literacy = (rng.gen_bool(0.8)).then(|| round_to(85.0 + 14.0 * dev, 2));
            put(&region, "Literacy Rate (in %)", year, literacy);
        }
    }
    b.finish()
}

/// Points drawn uniformly from axis-aligned boxes around `centers`.
/// Returns the points (shuffled) and the index of the generating center.
pub fn planted_clusters(
    centers: &[Point],
    half_width: Point,
    sizes: &[usize],
    seed: u64,
) -> (Vec<Point>, Vec<usize>) {
    assert_eq!(centers.len(), sizes.len(), "one size per center");
    let mut rng = rng::seeded(seed);
    let mut rows: Vec<(Point, usize)> = Vec::with_capacity(sizes.iter().sum());
    for (c, (&center, &size)) in centers.iter().zip(sizes).enumerate() {
        for _ in 0..size {
            let p = [
                center[0] + rng.gen_range(-half_width[0]..=half_width[0]),
                center[1] + rng.gen_range(-half_width[1]..=half_width[1]),
            ];
            rows.push((p, c));
        }
    }
    for i in (1..rows.len()).rev() {
        rows.swap(i, rng.gen_range(0..=i));
    }
    rows.into_iter().unzip()
}

/// `n` rows of five features in `[0, 1]` labeled by the argmax of four fixed
/// linear scores. Rows whose best and second-best scores are closer than
/// `margin` are redrawn, so the classes are linearly separable with at least
/// that margin.
pub fn linearly_separable(n: usize, margin: f64, seed: u64) -> (Matrix, Vec<usize>) {
    const SCORES: [[f64; PREDICTOR_COUNT + 1]; 4] = [
        // weights..., bias
        [1.5, -1.0, 0.5, 0.0, -0.5, 0.2],
        [-1.0, 1.5, 0.0, 0.5, 0.0, 0.1],
        [0.0, 0.5, 1.5, -1.0, 0.5, -0.1],
        [0.5, 0.0, -0.5, 1.5, 1.0, -0.6],
    ];
    let mut rng = rng::seeded(seed);
    let mut data = Vec::with_capacity(n * PREDICTOR_COUNT);
    let mut labels = Vec::with_capacity(n);
    while labels.len() < n {
        let x: [f64; PREDICTOR_COUNT] = std::array::from_fn(|_| rng.gen());
        let mut scores: Vec<(f64, usize)> = SCORES
            .iter()
            .enumerate()
            .map(|(k, w)| {
                let s = w[..PREDICTOR_COUNT]
                    .iter()
                    .zip(&x)
                    .map(|(a, b)| a * b)
                    .sum::<f64>()
                    + w[PREDICTOR_COUNT];
                (s, k)
            })
            .collect();
        scores.sort_by(|a, b| b.0.total_cmp(&a.0));
        if scores[0].0 - scores[1].0 < margin {
            continue;
        }
        data.extend_from_slice(&x);
        labels.push(scores[0].1);
    }
    (
        Matrix::from_vec(n, PREDICTOR_COUNT, data).expect("sized"),
        labels,
    )
}
