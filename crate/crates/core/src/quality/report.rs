use std::fmt::Write;

use serde::{Deserialize, Serialize};

/// The six evaluation metrics plus degenerate-band counts.
///
/// Text form: one `key  value` line per field, keys left-aligned, in the
/// order psnr, ssim, sam, cc, rmse, ergas, cc_skipped_bands,
/// ergas_floored_bands. An undefined CC prints as `nan`. JSON form: an
/// object with the same keys; an undefined CC is `null`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    /// dB
    pub psnr: f64,
    pub ssim: f64,
    /// degrees
    pub sam: f64,
    pub cc: Option<f64>,
    pub rmse: f64,
    pub ergas: f64,
    pub cc_skipped_bands: usize,
    pub ergas_floored_bands: usize,
}

impl MetricReport {
    pub fn to_text(&self) -> String {
        let cc = self.cc.map_or("nan".to_string(), |v| format!("{v:.6}"));
        let rows = [
            ("psnr", format!("{:.6}", self.psnr)),
            ("ssim", format!("{:.6}", self.ssim)),
            ("sam", format!("{:.6}", self.sam)),
            ("cc", cc),
            ("rmse", format!("{:.6}", self.rmse)),
            ("ergas", format!("{:.6}", self.ergas)),
            ("cc_skipped_bands", self.cc_skipped_bands.to_string()),
            ("ergas_floored_bands", self.ergas_floored_bands.to_string()),
        ];
        let mut out = String::new();
        for (k, v) in rows {
            writeln!(out, "{k:<20} {v}").unwrap();
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report() -> MetricReport {
        MetricReport {
            psnr: 20.0,
            ssim: 0.5,
            sam: 3.25,
            cc: None,
            rmse: 0.1,
            ergas: 7.0,
            cc_skipped_bands: 4,
            ergas_floored_bands: 0,
        }
    }

    #[test]
    fn text_order_and_alignment() {
        let text = report().to_text();
        let keys: Vec<_> = text.lines().map(|l| l.split_whitespace().next().unwrap()).collect();
        assert_eq!(keys[..6], ["psnr", "ssim", "sam", "cc", "rmse", "ergas"]);
        assert!(text.lines().all(|l| l.as_bytes()[20] == b' '));
        assert!(text.contains("cc                   nan"));
    }

    #[test]
    fn json_roundtrip() {
        let r = report();
        let json = r.to_json();
        assert!(json.contains("\"cc\": null"));
        assert_eq!(serde_json::from_str::<MetricReport>(&json).unwrap(), r);
    }
}
