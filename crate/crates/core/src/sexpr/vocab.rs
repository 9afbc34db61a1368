//! The closed vocabulary of head symbols: one per AST node kind, each with a
//! fixed arity and a kind per child slot.

/// Head symbols. `Compare` is accepted when reading terms back (it is the
/// generic three-slot comparison shape with the operator as a child) but the
/// encoder never emits it; encoded comparisons use `Eq`/`NotEq`/`Is`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Head {
    // statements
    StatementList,
    Print,
    Assign,
    ExprStmt,
    Return,
    Def,
    // expressions
    Add,
    And,
    Or,
    Eq,
    NotEq,
    Is,
    Neg,
    Not,
    Ternary,
    List,
    Dict,
    Subscript,
    Call,
    PrintExpr,
    // cons spines
    ExprList,
    KvList,
    Kv,
    IdList,
    // read-only compatibility form
    Compare,
}

/// What may legally occupy a child slot. Pattern holes are only ever valid
/// in [`SlotKind::Expr`] slots; everything else must be concrete.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotKind {
    /// An expression evaluated exactly once wherever the parent is
    /// evaluated. The only hole-friendly slot kind.
    Expr,
    /// An expression the parent may skip or short-circuit (ternary arms,
    /// right operands of `and`/`or`). A hole here would change when its
    /// argument runs, so holes are rejected.
    LazyExpr,
    /// Assignment target: identifier atom or a `subscript` application.
    Target,
    /// A statement node.
    Stmt,
    /// Tail of a statement spine: `StatementList`, `eps`, or an open tail.
    StmtTail,
    /// Element list tails (`exprlist`/`kvlist`/`idlist` or `eps`).
    ExprTail,
    KvTail,
    IdTail,
    /// A `kv` pair inside a dict spine.
    KvPair,
    /// A bare identifier (def name, def parameter).
    IdentSlot,
    /// The `def` parameter list head position (`idlist` or `eps`).
    ParamList,
    /// A `def` suite: a non-empty statement spine.
    Suite,
    /// The operator slot of `compare`.
    Operator,
}

impl Head {
    pub fn arity(self) -> usize {
        self.slots().len()
    }

    pub fn slots(self) -> &'static [SlotKind] {
        use SlotKind::*;
        match self {
            Head::StatementList => &[Stmt, StmtTail],
            Head::Print => &[Expr],
            Head::Assign => &[Target, Expr],
            Head::ExprStmt => &[Expr],
            Head::Return => &[Expr],
            Head::Def => &[IdentSlot, ParamList, Suite],
            Head::Add | Head::Eq | Head::NotEq | Head::Is | Head::Subscript | Head::Kv => {
                &[Expr, Expr]
            }
            Head::And | Head::Or => &[Expr, LazyExpr],
            Head::Neg | Head::Not | Head::PrintExpr => &[Expr],
            Head::Ternary => &[LazyExpr, Expr, LazyExpr],
            Head::List => &[ExprTail],
            Head::Dict => &[KvTail],
            Head::Call => &[Expr, ExprTail],
            Head::ExprList => &[Expr, ExprTail],
            Head::KvList => &[KvPair, KvTail],
            Head::IdList => &[IdentSlot, IdTail],
            Head::Compare => &[Expr, Operator, Expr],
        }
    }

    /// True for heads that produce a value, i.e. may fill an `Expr` slot.
    pub fn is_expression(self) -> bool {
        matches!(
            self,
            Head::Add
                | Head::And
                | Head::Or
                | Head::Eq
                | Head::NotEq
                | Head::Is
                | Head::Neg
                | Head::Not
                | Head::Ternary
                | Head::List
                | Head::Dict
                | Head::Subscript
                | Head::Call
                | Head::PrintExpr
                | Head::Compare
        )
    }

    /// True for statement heads.
    pub fn is_statement(self) -> bool {
        matches!(
            self,
            Head::Print | Head::Assign | Head::ExprStmt | Head::Return | Head::Def
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            Head::StatementList => "StatementList",
            Head::Print => "print",
            Head::Assign => "assign",
            Head::ExprStmt => "exprstmt",
            Head::Return => "return",
            Head::Def => "def",
            Head::Add => "add",
            Head::And => "and",
            Head::Or => "or",
            Head::Eq => "eq",
            Head::NotEq => "noteq",
            Head::Is => "is",
            Head::Neg => "neg",
            Head::Not => "not",
            Head::Ternary => "ternary",
            Head::List => "list",
            Head::Dict => "dict",
            Head::Subscript => "subscript",
            Head::Call => "call",
            Head::PrintExpr => "printexpr",
            Head::ExprList => "exprlist",
            Head::KvList => "kvlist",
            Head::Kv => "kv",
            Head::IdList => "idlist",
            Head::Compare => "compare",
        }
    }

    pub fn from_name(name: &str) -> Option<Head> {
        let head = match name {
            "StatementList" => Head::StatementList,
            "print" => Head::Print,
            "assign" => Head::Assign,
            "exprstmt" => Head::ExprStmt,
            "return" => Head::Return,
            "def" => Head::Def,
            "add" => Head::Add,
            "and" => Head::And,
            "or" => Head::Or,
            "eq" => Head::Eq,
            "noteq" => Head::NotEq,
            "is" => Head::Is,
            "neg" => Head::Neg,
            "not" => Head::Not,
            "ternary" => Head::Ternary,
            "list" => Head::List,
            "dict" => Head::Dict,
            "subscript" => Head::Subscript,
            "call" => Head::Call,
            "printexpr" => Head::PrintExpr,
            "exprlist" => Head::ExprList,
            "kvlist" => Head::KvList,
            "kv" => Head::Kv,
            "idlist" => Head::IdList,
            "compare" => Head::Compare,
            _ => return None,
        };
        Some(head)
    }
}
