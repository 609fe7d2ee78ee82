/// Built-in triliteral roots in normalized spelling.
pub const BUILTIN_ROOTS: &[&str] = &[
    "اكل", "لعب", "اخز", "كتب", "درس", "علم", "عمل", "شرب", "ذهب", "جلس", "خرج", "دخل", "فتح", "قرا", "سمع", "نظر",
    "كسر", "حمل", "رسم", "صنع", "زرع", "حفظ", "فهم", "طبخ", "غسل", "نصر", "ضرب", "قتل", "سكن", "سجد", "ركب", "رجع",
    "حكم", "حسب", "جمع", "جهد", "حبس", "حرق", "بصر", "بحر", "طهر", "ظهر", "عرق", "عرض", "عمر", "غرم", "صبر", "شكر",
    "قطع", "قبل", "نزل", "نقل", "وصل", "وجد", "وعد", "ولد", "سرق", "سبح", "صدق", "كذب", "لبس", "مسك", "نفع", "هرب",
    "فرح", "حزن", "غضب", "ضحك", "رفع", "وضع", "طلب", "بعد", "قرب", "كبر", "صغر", "شعر", "خبر", "سلم", "فقر", "نفس",
    "حلم", "خلق", "رزق", "عبد", "سجن", "قدر", "كرم", "لطف", "رحم", "شهد", "صلح", "فسد", "عدل", "ظلم", "جرح", "دفع",
    "حدد", "طبع", "عجم", "غرس",
];

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;
    use crate::morphology::Root;

    #[test]
    fn builtin_roots_are_valid_and_distinct() {
        assert!(BUILTIN_ROOTS.len() >= 100);
        let unique: HashSet<_> = BUILTIN_ROOTS.iter().collect();
        assert_eq!(unique.len(), BUILTIN_ROOTS.len());
        for r in BUILTIN_ROOTS {
            assert_eq!(Root::new(r).unwrap().arity(), 3, "{r}");
        }
        for named in ["اكل", "لعب", "اخز"] {
            assert!(BUILTIN_ROOTS.contains(&named));
        }
    }
}
