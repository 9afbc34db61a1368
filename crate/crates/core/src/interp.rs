//! Reference interpreter for supported P2.
//!
//! Semantics follow Python 3 on the supported subset: truthiness, `and`/`or`
//! returning operand values, bools behaving as ints under `+`, list
//! concatenation, reference semantics for lists and dicts, and Python's
//! `print` formatting. `eval(input())` consumes the next entry of an input
//! script. Used as the differential oracle: a rewritten corpus must produce
//! byte-identical output to the original.

use alloc::collections::BTreeMap;
use alloc::rc::Rc;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cell::RefCell;
use core::fmt::Write;
use thiserror::Error;

use crate::p2::{self, Expr, ExprKind, Program, Stmt, StmtKind, TargetKind};

const MAX_CALL_DEPTH: usize = 500;

/// Runtime values. Lists and dicts are shared mutable references; `is`
/// compares identity for them and plain value equality for ints and bools.
#[derive(Debug, Clone)]
pub enum Value {
    Int(i64),
    Bool(bool),
    List(Rc<RefCell<Vec<Value>>>),
    Dict(Rc<RefCell<Dict>>),
    /// The `None`-like result of `print(..)`.
    Unit,
    Function(Rc<FunctionData>),
}

#[derive(Debug)]
pub struct FunctionData {
    pub name: String,
    pub params: Vec<String>,
    pub suite: Vec<Stmt>,
}

/// Insertion-ordered map with Python's key semantics on the supported key
/// types: `True` and `1` are the same key, and the first-inserted key's
/// spelling wins in the repr.
#[derive(Debug, Default)]
pub struct Dict {
    entries: Vec<(DictKey, Value)>,
}

/// Hashable key values: numbers (with True/1 folded together but the
/// first spelling remembered), None, and functions by identity.
#[derive(Debug, Clone)]
enum DictKey {
    Num { value: i64, bool_spelling: bool },
    Unit,
    Function(Rc<FunctionData>),
}

impl DictKey {
    fn matches(&self, other: &DictKey) -> bool {
        match (self, other) {
            (DictKey::Num { value: a, .. }, DictKey::Num { value: b, .. }) => a == b,
            (DictKey::Unit, DictKey::Unit) => true,
            (DictKey::Function(a), DictKey::Function(b)) => Rc::ptr_eq(a, b),
            _ => false,
        }
    }
}

impl Dict {
    fn get(&self, key: &DictKey) -> Option<&Value> {
        self.entries.iter().find(|(k, _)| k.matches(key)).map(|(_, v)| v)
    }

    fn set(&mut self, key: DictKey, value: Value) {
        for (k, v) in self.entries.iter_mut() {
            if k.matches(&key) {
                *v = value;
                return;
            }
        }
        self.entries.push((key, value));
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Literal values consumed by successive `eval(input())` evaluations.
#[derive(Debug, Clone, Default)]
pub struct InputScript {
    values: Vec<Value>,
}

impl InputScript {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Parse one literal per line: ints, `True`/`False`, and list/dict
    /// displays of literals (unary minus allowed).
    pub fn parse(text: &str) -> Result<Self, ScriptError> {
        let mut values = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let expr = p2::parse_expression(line)
                .map_err(|e| ScriptError { line: i + 1, message: e.to_string() })?;
            let value = literal_value(&expr)
                .ok_or_else(|| ScriptError { line: i + 1, message: "not a literal".into() })?;
            values.push(value);
        }
        Ok(InputScript { values })
    }

    pub fn from_values(values: Vec<Value>) -> Self {
        InputScript { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
#[error("input script line {line}: {message}")]
pub struct ScriptError {
    pub line: usize,
    pub message: String,
}

fn literal_value(e: &Expr) -> Option<Value> {
    match &e.kind {
        ExprKind::Int(n) => Some(Value::Int(*n)),
        ExprKind::Bool(b) => Some(Value::Bool(*b)),
        ExprKind::Neg(inner) => match literal_value(inner)? {
            Value::Int(n) => Some(Value::Int(n.checked_neg()?)),
            Value::Bool(b) => Some(Value::Int(-(b as i64))),
            _ => None,
        },
        ExprKind::List(items) => {
            let vs: Option<Vec<Value>> = items.iter().map(literal_value).collect();
            Some(Value::List(Rc::new(RefCell::new(vs?))))
        }
        ExprKind::Dict(pairs) => {
            let mut d = Dict::default();
            for (k, v) in pairs {
                let key = match literal_value(k)? {
                    Value::Int(n) => DictKey::Num { value: n, bool_spelling: false },
                    Value::Bool(b) => DictKey::Num { value: b as i64, bool_spelling: true },
                    _ => return None,
                };
                d.set(key, literal_value(v)?);
            }
            Some(Value::Dict(Rc::new(RefCell::new(d))))
        }
        _ => None,
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum RuntimeError {
    #[error("name `{0}` is not defined")]
    UndefinedName(String),
    #[error("unsupported operand types for {op}")]
    TypeError { op: String },
    #[error("list index out of range")]
    IndexOutOfRange,
    #[error("list indices must be integers")]
    BadIndex,
    #[error("key not found")]
    KeyError,
    #[error("unhashable key type")]
    UnhashableKey,
    #[error("object is not subscriptable")]
    NotSubscriptable,
    #[error("object is not callable")]
    NotCallable,
    #[error("{name}() takes {expected} arguments but {got} were given")]
    ArityMismatch { name: String, expected: usize, got: usize },
    #[error("input script exhausted")]
    InputExhausted,
    #[error("integer overflow")]
    IntOverflow,
    #[error("maximum call depth exceeded")]
    CallDepthExceeded,
}

/// Run a program against an input script and return captured stdout.
pub fn run(p: &Program, script: &InputScript) -> Result<String, RuntimeError> {
    let mut interp = Interp {
        globals: BTreeMap::new(),
        inputs: script.values.clone(),
        next_input: 0,
        out: String::new(),
        depth: 0,
    };
    interp.exec_block(&p.body, None)?;
    Ok(interp.out)
}

struct Interp {
    globals: BTreeMap<String, Value>,
    inputs: Vec<Value>,
    next_input: usize,
    out: String,
    depth: usize,
}

enum Flow {
    Normal,
    Return(Value),
}

impl Interp {
    /// Execute statements; `locals` is `Some` inside a function body.
    fn exec_block(
        &mut self,
        stmts: &[Stmt],
        mut locals: Option<&mut BTreeMap<String, Value>>,
    ) -> Result<Option<Value>, RuntimeError> {
        for stmt in stmts {
            match self.exec_stmt(stmt, locals.as_deref_mut())? {
                Flow::Normal => {}
                Flow::Return(v) => return Ok(Some(v)),
            }
        }
        Ok(None)
    }

    fn exec_stmt(
        &mut self,
        stmt: &Stmt,
        mut locals: Option<&mut BTreeMap<String, Value>>,
    ) -> Result<Flow, RuntimeError> {
        match &stmt.kind {
            StmtKind::Print(e) => {
                let v = self.eval(e, locals.as_deref_mut())?;
                let text = display_value(&v);
                self.out.push_str(&text);
                self.out.push('\n');
                Ok(Flow::Normal)
            }
            StmtKind::Expr(e) => {
                self.eval(e, locals)?;
                Ok(Flow::Normal)
            }
            StmtKind::Return(e) => {
                let v = self.eval(e, locals)?;
                Ok(Flow::Return(v))
            }
            StmtKind::Assign { target, value } => {
                let v = self.eval(value, locals.as_deref_mut())?;
                match &target.kind {
                    TargetKind::Name(id) => {
                        let scope = match locals {
                            Some(l) => l,
                            None => &mut self.globals,
                        };
                        scope.insert(id.clone(), v);
                    }
                    TargetKind::Subscript(obj, index) => {
                        let container = self.eval(obj, locals.as_deref_mut())?;
                        let key = self.eval(index, locals)?;
                        assign_subscript(&container, &key, v)?;
                    }
                }
                Ok(Flow::Normal)
            }
            StmtKind::FunctionDef { name, params, suite } => {
                let data = FunctionData {
                    name: name.clone(),
                    params: params.clone(),
                    suite: suite.clone(),
                };
                let v = Value::Function(Rc::new(data));
                match locals {
                    Some(l) => l.insert(name.clone(), v),
                    None => self.globals.insert(name.clone(), v),
                };
                Ok(Flow::Normal)
            }
        }
    }

    fn lookup(
        &self,
        id: &str,
        locals: Option<&BTreeMap<String, Value>>,
    ) -> Result<Value, RuntimeError> {
        if let Some(l) = locals {
            if let Some(v) = l.get(id) {
                return Ok(v.clone());
            }
        }
        self.globals
            .get(id)
            .cloned()
            .ok_or_else(|| RuntimeError::UndefinedName(id.into()))
    }

    fn eval(
        &mut self,
        e: &Expr,
        mut locals: Option<&mut BTreeMap<String, Value>>,
    ) -> Result<Value, RuntimeError> {
        match &e.kind {
            ExprKind::Name(id) => self.lookup(id, locals.as_deref()),
            ExprKind::Int(n) => Ok(Value::Int(*n)),
            ExprKind::Bool(b) => Ok(Value::Bool(*b)),
            ExprKind::Neg(x) => {
                let v = self.eval(x, locals)?;
                let n = as_number(&v).ok_or(RuntimeError::TypeError { op: "unary -".into() })?;
                n.checked_neg().map(Value::Int).ok_or(RuntimeError::IntOverflow)
            }
            ExprKind::Not(x) => {
                let v = self.eval(x, locals)?;
                Ok(Value::Bool(!truthy(&v)))
            }
            ExprKind::Add(l, r) => {
                let lv = self.eval(l, locals.as_deref_mut())?;
                let rv = self.eval(r, locals)?;
                add_values(&lv, &rv)
            }
            ExprKind::And(l, r) => {
                let lv = self.eval(l, locals.as_deref_mut())?;
                if truthy(&lv) {
                    self.eval(r, locals)
                } else {
                    Ok(lv)
                }
            }
            ExprKind::Or(l, r) => {
                let lv = self.eval(l, locals.as_deref_mut())?;
                if truthy(&lv) {
                    Ok(lv)
                } else {
                    self.eval(r, locals)
                }
            }
            ExprKind::Eq(l, r) => {
                let lv = self.eval(l, locals.as_deref_mut())?;
                let rv = self.eval(r, locals)?;
                Ok(Value::Bool(values_equal(&lv, &rv)))
            }
            ExprKind::NotEq(l, r) => {
                let lv = self.eval(l, locals.as_deref_mut())?;
                let rv = self.eval(r, locals)?;
                Ok(Value::Bool(!values_equal(&lv, &rv)))
            }
            ExprKind::Is(l, r) => {
                let lv = self.eval(l, locals.as_deref_mut())?;
                let rv = self.eval(r, locals)?;
                Ok(Value::Bool(values_identical(&lv, &rv)))
            }
            ExprKind::Ternary { then_val, cond, or_else } => {
                let c = self.eval(cond, locals.as_deref_mut())?;
                if truthy(&c) {
                    self.eval(then_val, locals)
                } else {
                    self.eval(or_else, locals)
                }
            }
            ExprKind::List(items) => {
                let mut vs = Vec::with_capacity(items.len());
                for item in items {
                    vs.push(self.eval(item, locals.as_deref_mut())?);
                }
                Ok(Value::List(Rc::new(RefCell::new(vs))))
            }
            ExprKind::Dict(pairs) => {
                let mut d = Dict::default();
                for (k, v) in pairs {
                    let kv = self.eval(k, locals.as_deref_mut())?;
                    let key = dict_key(&kv)?;
                    let vv = self.eval(v, locals.as_deref_mut())?;
                    d.set(key, vv);
                }
                Ok(Value::Dict(Rc::new(RefCell::new(d))))
            }
            ExprKind::Subscript { object, index } => {
                let container = self.eval(object, locals.as_deref_mut())?;
                let key = self.eval(index, locals)?;
                read_subscript(&container, &key)
            }
            ExprKind::Call { callee, args } => {
                let f = self.eval(callee, locals.as_deref_mut())?;
                let mut vs = Vec::with_capacity(args.len());
                for a in args {
                    vs.push(self.eval(a, locals.as_deref_mut())?);
                }
                self.call(f, vs)
            }
            ExprKind::PrintCall(x) => {
                let v = self.eval(x, locals)?;
                let text = display_value(&v);
                self.out.push_str(&text);
                self.out.push('\n');
                Ok(Value::Unit)
            }
            ExprKind::EvalInput => {
                let v = self
                    .inputs
                    .get(self.next_input)
                    .cloned()
                    .ok_or(RuntimeError::InputExhausted)?;
                self.next_input += 1;
                Ok(v)
            }
        }
    }

    fn call(&mut self, f: Value, args: Vec<Value>) -> Result<Value, RuntimeError> {
        let Value::Function(data) = f else {
            return Err(RuntimeError::NotCallable);
        };
        if args.len() != data.params.len() {
            return Err(RuntimeError::ArityMismatch {
                name: data.name.clone(),
                expected: data.params.len(),
                got: args.len(),
            });
        }
        if self.depth >= MAX_CALL_DEPTH {
            return Err(RuntimeError::CallDepthExceeded);
        }
        self.depth += 1;
        let mut locals: BTreeMap<String, Value> = BTreeMap::new();
        for (p, v) in data.params.iter().zip(args) {
            locals.insert(p.clone(), v);
        }
        let result = self.exec_block(&data.suite, Some(&mut locals));
        self.depth -= 1;
        Ok(result?.unwrap_or(Value::Unit))
    }
}

fn as_number(v: &Value) -> Option<i64> {
    match v {
        Value::Int(n) => Some(*n),
        Value::Bool(b) => Some(*b as i64),
        _ => None,
    }
}

pub fn truthy(v: &Value) -> bool {
    match v {
        Value::Int(n) => *n != 0,
        Value::Bool(b) => *b,
        Value::List(l) => !l.borrow().is_empty(),
        Value::Dict(d) => !d.borrow().is_empty(),
        Value::Unit => false,
        Value::Function(_) => true,
    }
}

fn add_values(l: &Value, r: &Value) -> Result<Value, RuntimeError> {
    match (l, r) {
        (Value::List(a), Value::List(b)) => {
            let mut vs = a.borrow().clone();
            vs.extend(b.borrow().iter().cloned());
            Ok(Value::List(Rc::new(RefCell::new(vs))))
        }
        _ => {
            let (Some(a), Some(b)) = (as_number(l), as_number(r)) else {
                return Err(RuntimeError::TypeError { op: "+".into() });
            };
            a.checked_add(b).map(Value::Int).ok_or(RuntimeError::IntOverflow)
        }
    }
}

/// Python hashability on the supported values: lists and dicts are
/// unhashable, everything else keys a dict.
fn dict_key(v: &Value) -> Result<DictKey, RuntimeError> {
    match v {
        Value::Int(n) => Ok(DictKey::Num { value: *n, bool_spelling: false }),
        Value::Bool(b) => Ok(DictKey::Num { value: *b as i64, bool_spelling: true }),
        Value::Unit => Ok(DictKey::Unit),
        Value::Function(f) => Ok(DictKey::Function(Rc::clone(f))),
        Value::List(_) | Value::Dict(_) => Err(RuntimeError::UnhashableKey),
    }
}

fn read_subscript(container: &Value, key: &Value) -> Result<Value, RuntimeError> {
    match container {
        Value::List(l) => {
            let l = l.borrow();
            let idx = list_index(&l, key)?;
            Ok(l[idx].clone())
        }
        Value::Dict(d) => {
            let k = dict_key(key)?;
            d.borrow().get(&k).cloned().ok_or(RuntimeError::KeyError)
        }
        _ => Err(RuntimeError::NotSubscriptable),
    }
}

fn assign_subscript(container: &Value, key: &Value, value: Value) -> Result<(), RuntimeError> {
    match container {
        Value::List(l) => {
            let mut l = l.borrow_mut();
            let idx = list_index(&l, key)?;
            l[idx] = value;
            Ok(())
        }
        Value::Dict(d) => {
            let k = dict_key(key)?;
            d.borrow_mut().set(k, value);
            Ok(())
        }
        _ => Err(RuntimeError::NotSubscriptable),
    }
}

/// Python list indexing: bools count as ints, negatives index from the end.
fn list_index(items: &[Value], key: &Value) -> Result<usize, RuntimeError> {
    let n = as_number(key).ok_or(RuntimeError::BadIndex)?;
    let len = items.len() as i64;
    let idx = if n < 0 { n + len } else { n };
    if idx < 0 || idx >= len {
        return Err(RuntimeError::IndexOutOfRange);
    }
    Ok(idx as usize)
}

pub fn values_equal(l: &Value, r: &Value) -> bool {
    match (l, r) {
        (Value::List(a), Value::List(b)) => {
            if Rc::ptr_eq(a, b) {
                return true;
            }
            let (a, b) = (a.borrow(), b.borrow());
            a.len() == b.len() && a.iter().zip(b.iter()).all(|(x, y)| values_equal(x, y))
        }
        (Value::Dict(a), Value::Dict(b)) => {
            if Rc::ptr_eq(a, b) {
                return true;
            }
            let (a, b) = (a.borrow(), b.borrow());
            a.len() == b.len()
                && a.entries
                    .iter()
                    .all(|(k, v)| b.get(k).is_some_and(|w| values_equal(v, w)))
        }
        (Value::Unit, Value::Unit) => true,
        (Value::Function(a), Value::Function(b)) => Rc::ptr_eq(a, b),
        _ => match (as_number(l), as_number(r)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        },
    }
}

fn values_identical(l: &Value, r: &Value) -> bool {
    match (l, r) {
        (Value::Int(a), Value::Int(b)) => a == b,
        (Value::Bool(a), Value::Bool(b)) => a == b,
        (Value::List(a), Value::List(b)) => Rc::ptr_eq(a, b),
        (Value::Dict(a), Value::Dict(b)) => Rc::ptr_eq(a, b),
        (Value::Unit, Value::Unit) => true,
        (Value::Function(a), Value::Function(b)) => Rc::ptr_eq(a, b),
        _ => false,
    }
}

/// Python's `str()` of the supported values; containers use `repr` of
/// their elements, which coincides with `str` for everything we support.
pub fn display_value(v: &Value) -> String {
    let mut s = String::new();
    write_value(&mut s, v);
    s
}

fn write_value(out: &mut String, v: &Value) {
    match v {
        Value::Int(n) => {
            let _ = write!(out, "{n}");
        }
        Value::Bool(true) => out.push_str("True"),
        Value::Bool(false) => out.push_str("False"),
        Value::Unit => out.push_str("None"),
        Value::Function(f) => {
            let _ = write!(out, "<function {}>", f.name);
        }
        Value::List(items) => {
            out.push('[');
            for (i, item) in items.borrow().iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(out, item);
            }
            out.push(']');
        }
        Value::Dict(d) => {
            out.push('{');
            for (i, (k, v)) in d.borrow().entries.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                match k {
                    DictKey::Num { value, bool_spelling: false } => {
                        let _ = write!(out, "{value}");
                    }
                    DictKey::Num { value, bool_spelling: true } => {
                        out.push_str(if *value != 0 { "True" } else { "False" });
                    }
                    DictKey::Unit => out.push_str("None"),
                    DictKey::Function(f) => {
                        let _ = write!(out, "<function {}>", f.name);
                    }
                }
                out.push_str(": ");
                write_value(out, v);
            }
            out.push('}');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::p2::parse_program;

    fn run_src(src: &str, script: &str) -> Result<String, RuntimeError> {
        let p = parse_program(src).unwrap();
        let script = InputScript::parse(script).unwrap();
        run(&p, &script)
    }

    fn out(src: &str) -> String {
        run_src(src, "").unwrap()
    }

    #[test]
    fn prints_a_sum() {
        assert_eq!(out("print(1 + 2)"), "3\n");
    }

    #[test]
    fn eval_input_consumes_script_entries() {
        assert_eq!(run_src("x = eval(input())\nprint(x)\n", "True\n").unwrap(), "True\n");
        assert_eq!(
            run_src("x = eval(input())\ny = eval(input())\nprint(x + y)\n", "2\n3\n").unwrap(),
            "5\n"
        );
        assert_eq!(
            run_src("x = eval(input())\n", ""),
            Err(RuntimeError::InputExhausted)
        );
    }

    #[test]
    fn python_flavored_operators() {
        assert_eq!(out("print(True and 3)"), "3\n");
        assert_eq!(out("print(0 and 3)"), "0\n");
        assert_eq!(out("print(2 or 5)"), "2\n");
        assert_eq!(out("print(not [])"), "True\n");
        assert_eq!(out("print([1] + [2])"), "[1, 2]\n");
        assert_eq!(out("print(True + True)"), "2\n");
        assert_eq!(out("print(1 == True)"), "True\n");
        assert_eq!(out("print(1 if [] else 2)"), "2\n");
        assert_eq!(out("print(-True)"), "-1\n");
    }

    #[test]
    fn reference_semantics_for_lists() {
        let src = "x = [1, 2]\ny = x\ny[0] = 9\nprint(x)\nprint(x is y)\nprint([1] is [1])\n";
        assert_eq!(out(src), "[9, 2]\nTrue\nFalse\n");
    }

    #[test]
    fn dict_repr_and_bool_key_folding() {
        assert_eq!(out("print({1: 2, 3: 4})"), "{1: 2, 3: 4}\n");
        let src = "d = {True: 5}\nprint(d[1])\nd[1] = 6\nprint(d)\n";
        assert_eq!(out(src), "5\n{True: 6}\n");
    }

    #[test]
    fn negative_list_index() {
        assert_eq!(out("x = [1, 2, 3]\nprint(x[-1])\n"), "3\n");
        assert_eq!(
            run_src("x = [1]\nprint(x[5])\n", ""),
            Err(RuntimeError::IndexOutOfRange)
        );
    }

    #[test]
    fn functions_bind_late_and_read_globals() {
        let src = "def f(a):\n    return a + g\ng = 10\nprint(f(1))\n";
        assert_eq!(out(src), "11\n");
        // calling before the def executes is an undefined name
        assert_eq!(
            run_src("x = f(1)\ndef f(a):\n    return a\n", ""),
            Err(RuntimeError::UndefinedName("f".into()))
        );
    }

    #[test]
    fn assignments_in_functions_are_local() {
        let src = "x = 1\ndef f(a):\n    x = a\n    return x\ny = f(5)\nprint(x)\nprint(y)\n";
        assert_eq!(out(src), "1\n5\n");
    }

    #[test]
    fn return_print_returns_none() {
        let src = "def f(a):\n    return print(a)\nx = f(3)\nprint(x)\n";
        assert_eq!(out(src), "3\nNone\n");
    }

    #[test]
    fn arity_mismatch_is_an_error() {
        assert_eq!(
            run_src("def f(a):\n    return a\nprint(f(1, 2))\n", ""),
            Err(RuntimeError::ArityMismatch { name: "f".into(), expected: 1, got: 2 })
        );
    }

    #[test]
    fn type_errors() {
        assert_eq!(
            run_src("print([1] + 2)", ""),
            Err(RuntimeError::TypeError { op: "+".into() })
        );
        assert_eq!(run_src("x = 3\nx[0] = 1\n", ""), Err(RuntimeError::NotSubscriptable));
    }

    #[test]
    fn determinism() {
        let src = "x = eval(input())\nprint({1: x, 2: [x, x]})\n";
        let a = run_src(src, "[7]\n").unwrap();
        let b = run_src(src, "[7]\n").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, "{1: [7], 2: [[7], [7]]}\n");
    }

    #[test]
    fn recursion_through_ternary() {
        let src = "def f(n):\n    return 0 if n == 0 else f(n + -1) + n\nprint(f(4))\n";
        assert_eq!(out(src), "10\n");
    }

    #[test]
    fn mutation_through_function_reference() {
        let src = "def f(xs):\n    xs[0] = 99\n    return xs\na = [1]\nb = f(a)\nprint(a)\nprint(a is b)\n";
        assert_eq!(out(src), "[99]\nTrue\n");
    }
}
