use crate::error::{CoreError, Result};

/// Identifier of one of the five built-in binary classification tasks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TaskId {
    /// Odd digits are positive.
    Parity,
    /// Digits greater than four are positive.
    GreaterThanFour,
    /// Multiples of three (including zero) are positive.
    MultipleOfThree,
    /// Primes, counting one as prime, are positive.
    PrimeIncludingOne,
    /// Digits in [2, 5] are positive.
    RangeTwoToFive,
}

impl TaskId {
    pub const ALL: [TaskId; 5] = [
        TaskId::Parity,
        TaskId::GreaterThanFour,
        TaskId::MultipleOfThree,
        TaskId::PrimeIncludingOne,
        TaskId::RangeTwoToFive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TaskId::Parity => "parity",
            TaskId::GreaterThanFour => "gt4",
            TaskId::MultipleOfThree => "mult3",
            TaskId::PrimeIncludingOne => "prime",
            TaskId::RangeTwoToFive => "range25",
        }
    }

    pub fn from_name(name: &str) -> Result<TaskId> {
        TaskId::ALL
            .into_iter()
            .find(|t| t.name() == name)
            .ok_or_else(|| CoreError::InvalidArgument(format!("unknown task `{name}`")))
    }
}

/// A binary labeling of the decimal digits: the positive set maps to class 1,
/// everything else to class 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskSpec {
    id: TaskId,
    positive: [bool; 10],
}

impl TaskSpec {
    /// The built-in task for `id`.
    pub fn builtin(id: TaskId) -> TaskSpec {
        let positives: &[u8] = match id {
            TaskId::Parity => &[1, 3, 5, 7, 9],
            TaskId::GreaterThanFour => &[5, 6, 7, 8, 9],
            TaskId::MultipleOfThree => &[0, 3, 6, 9],
            TaskId::PrimeIncludingOne => &[1, 2, 3, 5, 7],
            TaskId::RangeTwoToFive => &[2, 3, 4, 5],
        };
        let mut positive = [false; 10];
        for &d in positives {
            positive[d as usize] = true;
        }
        TaskSpec { id, positive }
    }

    pub fn all_builtin() -> [TaskSpec; 5] {
        TaskId::ALL.map(TaskSpec::builtin)
    }

    pub fn id(&self) -> TaskId {
        self.id
    }

    /// Class index of `digit` under this task: 1 iff the digit is positive.
    pub fn label(&self, digit: u8) -> Result<usize> {
        if digit > 9 {
            return Err(CoreError::InvalidArgument(format!(
                "digit must be in 0..=9, got {digit}"
            )));
        }
        Ok(usize::from(self.positive[digit as usize]))
    }
}

/// Class index of `digit` under `task`.
pub fn task_label(task: &TaskSpec, digit: u8) -> Result<usize> {
    task.label(digit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_examples() {
        assert_eq!(
            TaskSpec::builtin(TaskId::GreaterThanFour).label(5).unwrap(),
            1
        );
        assert_eq!(
            TaskSpec::builtin(TaskId::PrimeIncludingOne)
                .label(1)
                .unwrap(),
            1
        );
        assert_eq!(
            TaskSpec::builtin(TaskId::MultipleOfThree).label(9).unwrap(),
            1
        );
    }

    #[test]
    fn zero_is_a_multiple_of_three() {
        assert_eq!(
            TaskSpec::builtin(TaskId::MultipleOfThree).label(0).unwrap(),
            1
        );
    }

    #[test]
    fn digit_two_across_builtin_order() {
        let labels: Vec<usize> = TaskSpec::all_builtin()
            .iter()
            .map(|t| t.label(2).unwrap())
            .collect();
        assert_eq!(labels, vec![0, 0, 0, 1, 1]);
    }

    #[test]
    fn out_of_range_digit_is_rejected() {
        assert!(TaskSpec::builtin(TaskId::Parity).label(10).is_err());
    }

    #[test]
    fn positive_sets_are_proper_subsets() {
        for task in TaskSpec::all_builtin() {
            let count = (0..10u8).filter(|&d| task.label(d).unwrap() == 1).count();
            assert!(count > 0 && count < 10, "{:?} degenerate", task.id());
        }
    }

    #[test]
    fn task_names_round_trip() {
        for id in TaskId::ALL {
            assert_eq!(TaskId::from_name(id.name()).unwrap(), id);
        }
        assert!(TaskId::from_name("nope").is_err());
    }
}
