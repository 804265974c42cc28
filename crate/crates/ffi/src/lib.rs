//! C ABI over `fdistinct`: agreement scores, alignment verdicts and
//! trained-model prediction.
//!
//! Every function returns an `FdStatus`. On failure a message is kept
//! per thread and can be read with `fd_last_error`. Handles are opaque
//! and must be released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::ptr;

use fdistinct::classify::{ClassifyError, TrainedModel};
use fdistinct::crowd::{self, JudgmentSet};
use fdistinct::features::{Block, FeatureSpace};
use fdistinct::ingest::{EntityStore, IngestError};
use fdistinct::seneca::{self, AlignmentGraph, SenecaConfig, SenecaError};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Io = 3,
    Parse = 4,
    InvalidArgument = 5,
    NotFound = 6,
    Panic = 7,
}

/// One worker's vote on an entity.
#[repr(C)]
pub struct FdVote {
    pub worker: *const c_char,
    pub label: *const c_char,
    /// In (0, 1].
    pub trust: f64,
}

#[repr(C)]
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct FdVerdict {
    pub is_class: bool,
    pub is_physical_object: bool,
}

#[repr(C)]
#[derive(Debug, Default, Clone, Copy, PartialEq)]
pub struct FdPrediction {
    /// +1 for the positive class (C or PO), -1 otherwise.
    pub label: i32,
    pub score: f64,
}

/// An entity store written by `fd ingest`.
pub struct FdStore(EntityStore);

/// An alignment graph.
pub struct FdGraph(AlignmentGraph);

/// A trained model together with its feature space.
pub struct FdModel {
    model: TrainedModel,
    space: FeatureSpace,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Fail(FdStatus, String);

type Res<T> = Result<T, Fail>;

impl From<IngestError> for Fail {
    fn from(e: IngestError) -> Self {
        let s = match e {
            IngestError::Io(_) => FdStatus::Io,
            _ => FdStatus::Parse,
        };
        Fail(s, e.to_string())
    }
}

impl From<SenecaError> for Fail {
    fn from(e: SenecaError) -> Self {
        let s = match e {
            SenecaError::Io(_) => FdStatus::Io,
            _ => FdStatus::Parse,
        };
        Fail(s, e.to_string())
    }
}

impl From<ClassifyError> for Fail {
    fn from(e: ClassifyError) -> Self {
        let s = match e {
            ClassifyError::Io(_) => FdStatus::Io,
            ClassifyError::Json(_) | ClassifyError::BadModel(_) => FdStatus::Parse,
            _ => FdStatus::InvalidArgument,
        };
        Fail(s, e.to_string())
    }
}

impl From<crowd::CrowdError> for Fail {
    fn from(e: crowd::CrowdError) -> Self {
        Fail(FdStatus::InvalidArgument, e.to_string())
    }
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Res<()>) -> FdStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FdStatus::Ok,
        Ok(Err(Fail(s, m))) => {
            set_error(m);
            s
        }
        Err(p) => {
            let m = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {m}"));
            FdStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(FdStatus::NullArgument, format!("{what} is NULL"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Res<&'a str> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(FdStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Res<&'a T> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, v: T) -> Res<()> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(v);
    Ok(())
}

/// The message of the last failed call on this thread, or NULL. Valid
/// until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn fd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Trust-weighted agreement of `n` votes on `class`: the trust mass of
/// votes for `class` divided by the total trust.
///
/// # Safety
/// `votes` points to `n` valid votes; strings are NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn fd_agreement(
    votes: *const FdVote,
    n: usize,
    class: *const c_char,
    out: *mut f64,
) -> FdStatus {
    guard(|| {
        let class = text(class, "class")?;
        if votes.is_null() && n > 0 {
            return Err(null("votes"));
        }
        let mut set = JudgmentSet::new("<ffi>");
        for i in 0..n {
            let v = &*votes.add(i);
            set = set.vote(text(v.worker, "worker")?, text(v.label, "label")?, v.trust);
        }
        put(out, crowd::agreement(&set, class)?)
    })
}

/// Loads an entity store file.
///
/// # Safety
/// `path` is NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn fd_store_load(path: *const c_char, out: *mut *mut FdStore) -> FdStatus {
    guard(|| {
        let path = text(path, "path")?;
        let store = EntityStore::load(Path::new(path))?;
        put(out, Box::into_raw(Box::new(FdStore(store))))
    })
}

/// Number of entity records, 0 for NULL.
///
/// # Safety
/// `store` is NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fd_store_len(store: *const FdStore) -> usize {
    store.as_ref().map_or(0, |s| s.0.len())
}

/// # Safety
/// `store` is NULL or a handle from `fd_store_load`, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn fd_store_free(store: *mut FdStore) {
    if !store.is_null() {
        drop(Box::from_raw(store));
    }
}

/// Loads `n` alignment TSV files into one graph with the default rules.
///
/// # Safety
/// `paths` points to `n` NUL-terminated strings; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn fd_graph_load(
    paths: *const *const c_char,
    n: usize,
    out: *mut *mut FdGraph,
) -> FdStatus {
    guard(|| {
        if paths.is_null() && n > 0 {
            return Err(null("paths"));
        }
        let files: Vec<PathBuf> = (0..n)
            .map(|i| text(*paths.add(i), "path").map(PathBuf::from))
            .collect::<Res<_>>()?;
        let g = AlignmentGraph::load(&files, SenecaConfig::default())?;
        put(out, Box::into_raw(Box::new(FdGraph(g))))
    })
}

/// # Safety
/// `graph` is NULL or a handle from `fd_graph_load`, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn fd_graph_free(graph: *mut FdGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Alignment verdicts for one entity IRI. When `store` is given, the
/// entity's categories recorded there count as category memberships.
///
/// # Safety
/// `graph` is a live handle, `store` NULL or a live handle, `iri`
/// NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fd_seneca_verdict(
    graph: *const FdGraph,
    store: *const FdStore,
    iri: *const c_char,
    out: *mut FdVerdict,
) -> FdStatus {
    guard(|| {
        let g = &handle(graph, "graph")?.0;
        let iri = text(iri, "iri")?;
        let no_categories = std::collections::BTreeSet::new();
        let categories = store
            .as_ref()
            .and_then(|s| s.0.get(iri))
            .map_or(&no_categories, |r| &r.categories);
        let v = seneca::verdict_for(iri, categories, g);
        put(
            out,
            FdVerdict {
                is_class: v.flag(fdistinct::Task::ClassInstance),
                is_physical_object: v.flag(fdistinct::Task::PhysicalObject),
            },
        )
    })
}

/// Loads a model written by `fd train` and the feature space stored next
/// to it (`<path>.space.json`).
///
/// # Safety
/// `path` is NUL-terminated; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn fd_model_load(path: *const c_char, out: *mut *mut FdModel) -> FdStatus {
    guard(|| {
        let path = text(path, "path")?;
        let model = TrainedModel::load(Path::new(path))?;
        let space_file = format!("{path}.space.json");
        let raw = std::fs::read_to_string(&space_file)
            .map_err(|e| Fail(FdStatus::Io, format!("{space_file}: {e}")))?;
        let space: FeatureSpace = serde_json::from_str(&raw)
            .map_err(|e| Fail(FdStatus::Parse, format!("{space_file}: {e}")))?;
        if space.id() != model.space {
            return Err(Fail(
                FdStatus::InvalidArgument,
                format!("{space_file} does not belong to {path}"),
            ));
        }
        put(out, Box::into_raw(Box::new(FdModel { model, space })))
    })
}

/// Whether the model reads alignment verdicts (the D block).
///
/// # Safety
/// `model` is NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fd_model_uses_verdicts(model: *const FdModel) -> bool {
    model.as_ref().is_some_and(|m| m.space.blocks().contains(Block::D))
}

/// Classifies a store entity. `verdict` is the entity's alignment verdict
/// for the model's task; it is ignored unless the model uses it.
///
/// # Safety
/// `model` and `store` are live handles, `iri` NUL-terminated, `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn fd_model_predict(
    model: *const FdModel,
    store: *const FdStore,
    iri: *const c_char,
    verdict: bool,
    out: *mut FdPrediction,
) -> FdStatus {
    guard(|| {
        let m = handle(model, "model")?;
        let s = &handle(store, "store")?.0;
        let iri = text(iri, "iri")?;
        let rec = s
            .get(iri)
            .ok_or_else(|| Fail(FdStatus::NotFound, format!("{iri}: not in the store")))?;
        let mut diags = Vec::new();
        let p = m.model.predict(&m.space.assemble(rec, verdict, &mut diags))?;
        put(
            out,
            FdPrediction {
                label: if p.label.is_positive() { 1 } else { -1 },
                score: p.score,
            },
        )
    })
}

/// # Safety
/// `model` is NULL or a handle from `fd_model_load`, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn fd_model_free(model: *mut FdModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}
