use serde::{Deserialize, Serialize};

use super::ContentLabel;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub label: ContentLabel,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
    pub predicted: usize,
}

/// Macro averages are unweighted means over the two classes. Accuracy is
/// only filled in for balanced (negative-sampled) evaluations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub accuracy: Option<f64>,
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
    pub per_class: Vec<ClassMetrics>,
    pub test_size: usize,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// A class never predicted has precision 0; a class never present has recall 0.
pub fn macro_metrics(gold: &[ContentLabel], predicted: &[ContentLabel], with_accuracy: bool) -> MetricsReport {
    assert_eq!(gold.len(), predicted.len(), "gold and predictions differ in length");
    let per_class: Vec<ClassMetrics> = ContentLabel::ALL
        .into_iter()
        .map(|label| {
            let tp = gold
                .iter()
                .zip(predicted)
                .filter(|(g, p)| **g == label && **p == label)
                .count();
            let support = gold.iter().filter(|g| **g == label).count();
            let pred = predicted.iter().filter(|p| **p == label).count();
            let precision = ratio(tp, pred);
            let recall = ratio(tp, support);
            let f1 = if precision + recall > 0.0 {
                2.0 * precision * recall / (precision + recall)
            } else {
                0.0
            };
            ClassMetrics {
                label,
                precision,
                recall,
                f1,
                support,
                predicted: pred,
            }
        })
        .collect();
    let mean = |f: fn(&ClassMetrics) -> f64| per_class.iter().map(f).sum::<f64>() / per_class.len() as f64;
    let correct = gold.iter().zip(predicted).filter(|(g, p)| g == p).count();
    MetricsReport {
        accuracy: with_accuracy.then(|| ratio(correct, gold.len())),
        macro_precision: mean(|c| c.precision),
        macro_recall: mean(|c| c.recall),
        macro_f1: mean(|c| c.f1),
        per_class,
        test_size: gold.len(),
    }
}

/// Element-wise mean of several reports (used for repeated random trials).
pub fn average_reports(reports: &[MetricsReport]) -> Option<MetricsReport> {
    let first = reports.first()?;
    let n = reports.len() as f64;
    let avg = |f: &dyn Fn(&MetricsReport) -> f64| reports.iter().map(f).sum::<f64>() / n;
    let per_class = (0..first.per_class.len())
        .map(|i| ClassMetrics {
            label: first.per_class[i].label,
            precision: avg(&|r| r.per_class[i].precision),
            recall: avg(&|r| r.per_class[i].recall),
            f1: avg(&|r| r.per_class[i].f1),
            support: first.per_class[i].support,
            predicted: (avg(&|r| r.per_class[i].predicted as f64)).round() as usize,
        })
        .collect();
    Some(MetricsReport {
        accuracy: first.accuracy.map(|_| avg(&|r| r.accuracy.unwrap_or(0.0))),
        macro_precision: avg(&|r| r.macro_precision),
        macro_recall: avg(&|r| r.macro_recall),
        macro_f1: avg(&|r| r.macro_f1),
        per_class,
        test_size: first.test_size,
    })
}
